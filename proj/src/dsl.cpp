#include "sitekit/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sitekit {

namespace {

struct Token {
  std::string text;
  int col = 0;  // 1-based
};

[[noreturn]] void fail(ErrorKind kind, int line, int col,
                       const std::string& message) {
  throw Error(kind, "line " + std::to_string(line) + ", col " +
                        std::to_string(col) + ": " + message);
}

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::vector<Token> tokenize(const std::string& raw, int line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < raw.size()) {
    char c = raw[i];
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    int col = static_cast<int>(i) + 1;
    if (c == '-' && i + 1 < raw.size() && raw[i + 1] == '>') {
      out.push_back({"->", col});
      i += 2;
      continue;
    }
    if (std::string(":={}(),").find(c) != std::string::npos) {
      out.push_back({std::string(1, c), col});
      ++i;
      continue;
    }
    if (name_char(c)) {
      std::size_t j = i;
      while (j < raw.size() && name_char(raw[j])) ++j;
      out.push_back({raw.substr(i, j - i), col});
      i = j;
      continue;
    }
    fail(ErrorKind::ParseError, line, col,
         std::string("unexpected character '") + c + "'");
  }
  return out;
}

// One line of tokens with a consume-or-diagnose interface.
struct Cursor {
  const std::vector<Token>& toks;
  int line;
  std::size_t pos = 0;

  bool done() const { return pos >= toks.size(); }
  int here() const {
    return done() ? (toks.empty() ? 1 : toks.back().col +
                                            static_cast<int>(
                                                toks.back().text.size()))
                  : toks[pos].col;
  }
  bool peek(const std::string& text) const {
    return !done() && toks[pos].text == text;
  }
  bool accept(const std::string& text) {
    if (!peek(text)) return false;
    ++pos;
    return true;
  }
  void expect(const std::string& text) {
    if (!accept(text)) {
      fail(ErrorKind::ParseError, line, here(), "expected '" + text + "'");
    }
  }
  Token name(const std::string& what) {
    if (done() || !name_char(toks[pos].text[0])) {
      fail(ErrorKind::ParseError, line, here(), "expected " + what);
    }
    return toks[pos++];
  }
  void finish() {
    if (!done()) {
      fail(ErrorKind::ParseError, line, here(),
           "unexpected trailing token '" + toks[pos].text + "'");
    }
  }
};

struct LineReader {
  std::vector<std::pair<int, std::vector<Token>>> lines;  // nonempty only
  std::size_t next = 0;

  explicit LineReader(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      std::vector<Token> toks = tokenize(raw, number);
      if (!toks.empty()) lines.push_back({number, std::move(toks)});
    }
  }
  bool done() const { return next >= lines.size(); }
};

class Parser {
 public:
  Parser(const std::string& text, const Budget& budget)
      : reader_(text), budget_(budget) {}

  Workspace run() {
    while (!reader_.done()) {
      auto& [line, toks] = reader_.lines[reader_.next++];
      Cursor cur{toks, line};
      Token head = cur.name("a block keyword");
      if (head.text == "category") {
        parse_category(cur);
      } else if (head.text == "topology") {
        parse_topology(cur);
      } else if (head.text == "site") {
        parse_site(cur);
      } else if (head.text == "functor") {
        parse_functor(cur);
      } else if (head.text == "presheaf") {
        parse_presheaf(cur);
      } else {
        fail(ErrorKind::ParseError, line, head.col,
             "unknown block keyword '" + head.text + "'");
      }
    }
    return std::move(ws_);
  }

 private:
  LineReader reader_;
  Budget budget_;
  Workspace ws_;

  void declare(const std::string& kind, const Token& name, int line) {
    std::string key = kind + ":" + name.text;
    if (ws_.defined_at.count(key)) {
      fail(ErrorKind::DuplicateName, line, name.col,
           "duplicate " + kind + " name '" + name.text + "'");
    }
    ws_.defined_at[key] = line;
  }

  // Body lines of a block, consumed up to the matching `end`.
  std::vector<std::pair<int, std::vector<Token>>> block_body(int start_line) {
    std::vector<std::pair<int, std::vector<Token>>> body;
    while (!reader_.done()) {
      auto& [line, toks] = reader_.lines[reader_.next++];
      if (toks.size() == 1 && toks[0].text == "end") return body;
      body.push_back({line, toks});
    }
    fail(ErrorKind::ParseError, start_line, 1,
         "block is never closed by 'end'");
  }

  const FinCategory& resolve_category(const Token& name, int line) {
    for (const FinCategory& cat : ws_.categories) {
      if (cat.name() == name.text) return cat;
    }
    fail(ErrorKind::UnresolvedReference, line, name.col,
         "unknown category '" + name.text + "'");
  }

  void parse_category(Cursor& cur) {
    Token name = cur.name("a category name");
    cur.finish();
    declare("category", name, cur.line);

    CategorySpec spec;
    spec.name = name.text;
    auto has_object = [&](const std::string& o) {
      return std::find(spec.objects.begin(), spec.objects.end(), o) !=
             spec.objects.end();
    };
    auto arrow_known = [&](const std::string& a) {
      if (a.rfind("id_", 0) == 0 && has_object(a.substr(3))) return true;
      for (const ArrowDecl& d : spec.arrows) {
        if (d.name == a) return true;
      }
      return false;
    };

    for (auto& [line, toks] : block_body(cur.line)) {
      Cursor body{toks, line};
      Token head = body.name("a category clause");
      if (head.text == "objects") {
        body.expect(":");
        while (!body.done()) spec.objects.push_back(body.name("an object").text);
      } else if (head.text == "arrow") {
        Token f = body.name("an arrow name");
        body.expect(":");
        Token src = body.name("a source object");
        body.expect("->");
        Token tgt = body.name("a target object");
        body.finish();
        for (const Token* t : {&src, &tgt}) {
          if (!has_object(t->text)) {
            fail(ErrorKind::UnresolvedReference, line, t->col,
                 "unknown object '" + t->text + "'");
          }
        }
        spec.arrows.push_back({f.text, src.text, tgt.text});
      } else if (head.text == "compose") {
        Token outer = body.name("an arrow name");
        Token inner = body.name("an arrow name");
        body.expect("=");
        Token result = body.name("an arrow name");
        body.finish();
        for (const Token* t : {&outer, &inner, &result}) {
          if (!arrow_known(t->text)) {
            fail(ErrorKind::UnresolvedReference, line, t->col,
                 "unknown arrow '" + t->text + "'");
          }
        }
        spec.equations.push_back({outer.text, inner.text, result.text});
      } else {
        fail(ErrorKind::ParseError, line, head.col,
             "unknown category clause '" + head.text + "'");
      }
    }
    ws_.categories.push_back(FinCategory::build(spec, budget_));
  }

  void parse_topology(Cursor& cur) {
    Token name = cur.name("a topology name");
    cur.expect("on");
    Token cat_name = cur.name("a category name");
    cur.finish();
    declare("topology", name, cur.line);
    const FinCategory& cat = resolve_category(cat_name, cur.line);

    std::vector<Sieve> seeds;
    std::string kind;
    bool saw_cover = false;
    for (auto& [line, toks] : block_body(cur.line)) {
      Cursor body{toks, line};
      Token head = body.name("a topology clause");
      if (head.text == "cover") {
        Token obj = body.name("an object name");
        body.expect(":");
        body.expect("{");
        auto c = cat.object_id(obj.text);
        if (!c) {
          fail(ErrorKind::UnresolvedReference, line, obj.col,
               "unknown object '" + obj.text + "'");
        }
        ArrowSet generators = 0;
        while (!body.accept("}")) {
          Token g = body.name("an arrow name or '}'");
          auto f = cat.arrow_id(g.text);
          if (!f) {
            fail(ErrorKind::UnresolvedReference, line, g.col,
                 "unknown arrow '" + g.text + "'");
          }
          if (cat.target(*f) != *c) {
            fail(ErrorKind::ParseError, line, g.col,
                 "arrow '" + g.text + "' does not target '" + obj.text + "'");
          }
          generators |= ArrowSet{1} << *f;
        }
        body.finish();
        seeds.push_back(close_to_sieve(cat, *c, generators));
        saw_cover = true;
      } else if (head.text == "kind") {
        body.expect(":");
        Token k = body.name("trivial, atomic or dense");
        body.finish();
        if (k.text != "trivial" && k.text != "atomic" && k.text != "dense") {
          fail(ErrorKind::ParseError, line, k.col,
               "unknown topology kind '" + k.text + "'");
        }
        kind = k.text;
      } else {
        fail(ErrorKind::ParseError, line, head.col,
             "unknown topology clause '" + head.text + "'");
      }
    }
    if (!kind.empty() && saw_cover) {
      fail(ErrorKind::ParseError, cur.line, 1,
           "topology '" + name.text + "' mixes 'kind' with explicit covers");
    }
    GrothendieckTopology topo;
    if (kind == "trivial") {
      topo = canonical_topology(cat, CanonicalKind::Trivial);
    } else if (kind == "atomic") {
      topo = canonical_topology(cat, CanonicalKind::Atomic);
    } else if (kind == "dense") {
      topo = canonical_topology(cat, CanonicalKind::Dense);
    } else {
      topo = generate_topology(cat, seeds, budget_);
    }
    ws_.topologies.push_back({name.text, cat.name(), std::move(topo)});
  }

  void parse_site(Cursor& cur) {
    Token name = cur.name("a site name");
    cur.expect("=");
    cur.expect("(");
    Token cat_name = cur.name("a category name");
    cur.expect(",");
    Token topo_name = cur.name("a topology name");
    cur.expect(")");
    cur.finish();
    declare("site", name, cur.line);
    resolve_category(cat_name, cur.line);
    const NamedTopology* topo = nullptr;
    for (const NamedTopology& t : ws_.topologies) {
      if (t.name == topo_name.text) topo = &t;
    }
    if (!topo) {
      fail(ErrorKind::UnresolvedReference, cur.line, topo_name.col,
           "unknown topology '" + topo_name.text + "'");
    }
    if (topo->category != cat_name.text) {
      fail(ErrorKind::ParseError, cur.line, topo_name.col,
           "topology '" + topo_name.text + "' lives on category '" +
               topo->category + "', not '" + cat_name.text + "'");
    }
    ws_.sites.push_back({name.text, cat_name.text, topo_name.text});
  }

  // Shared body for functor and presheaf blocks.  For an arrow f: a→b the
  // pair list maps sets(a)→sets(b) covariantly and sets(b)→sets(a)
  // contravariantly.
  struct ElementBody {
    std::vector<int> sizes;
    std::vector<std::vector<int>> action;
  };

  ElementBody parse_elements(const FinCategory& cat, int start_line,
                             bool contravariant) {
    std::vector<std::vector<std::string>> elems(cat.num_objects());
    std::vector<char> have_object(cat.num_objects(), 0);
    struct ArrowLine {
      ArrId f;
      int line;
      std::vector<std::pair<Token, Token>> pairs;
    };
    std::vector<ArrowLine> arrow_lines;
    std::vector<char> have_arrow(cat.num_arrows(), 0);

    for (auto& [line, toks] : block_body(start_line)) {
      Cursor body{toks, line};
      body.expect("on");
      Token name = body.name("an object or arrow name");
      if (body.accept("=")) {
        auto c = cat.object_id(name.text);
        if (!c) {
          fail(ErrorKind::UnresolvedReference, line, name.col,
               "unknown object '" + name.text + "'");
        }
        if (have_object[*c]) {
          fail(ErrorKind::DuplicateName, line, name.col,
               "object '" + name.text + "' listed twice");
        }
        have_object[*c] = 1;
        body.expect("{");
        while (!body.accept("}")) {
          Token e = body.name("an element name or '}'");
          auto& list = elems[*c];
          if (std::find(list.begin(), list.end(), e.text) != list.end()) {
            fail(ErrorKind::DuplicateName, line, e.col,
                 "element '" + e.text + "' listed twice");
          }
          list.push_back(e.text);
        }
        body.finish();
      } else {
        body.expect(":");
        auto f = cat.arrow_id(name.text);
        if (!f) {
          fail(ErrorKind::UnresolvedReference, line, name.col,
               "unknown arrow '" + name.text + "'");
        }
        if (have_arrow[*f]) {
          fail(ErrorKind::DuplicateName, line, name.col,
               "arrow '" + name.text + "' listed twice");
        }
        have_arrow[*f] = 1;
        ArrowLine al{*f, line, {}};
        while (!body.done()) {
          Token from = body.name("an element name");
          body.expect("->");
          Token to = body.name("an element name");
          al.pairs.push_back({from, to});
          if (!body.done()) body.expect(",");
        }
        arrow_lines.push_back(std::move(al));
      }
    }

    ElementBody out;
    out.sizes.resize(cat.num_objects());
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      out.sizes[c] = static_cast<int>(elems[c].size());
    }
    auto index_of = [&](ObjId c, const Token& e, int line) {
      const auto& list = elems[c];
      auto it = std::find(list.begin(), list.end(), e.text);
      if (it == list.end()) {
        fail(ErrorKind::UnresolvedReference, line, e.col,
             "element '" + e.text + "' is not in " + cat.object_name(c));
      }
      return static_cast<int>(it - list.begin());
    };

    out.action.resize(cat.num_arrows());
    for (const ArrowLine& al : arrow_lines) {
      ObjId dom = contravariant ? cat.target(al.f) : cat.source(al.f);
      ObjId cod = contravariant ? cat.source(al.f) : cat.target(al.f);
      std::vector<int> table(out.sizes[dom], -1);
      for (const auto& [from, to] : al.pairs) {
        int x = index_of(dom, from, al.line);
        int y = index_of(cod, to, al.line);
        if (table[x] != -1) {
          fail(ErrorKind::ParseError, al.line, from.col,
               "element '" + from.text + "' mapped twice");
        }
        table[x] = y;
      }
      for (int x = 0; x < out.sizes[dom]; ++x) {
        if (table[x] == -1) {
          fail(ErrorKind::ParseError, al.line, 1,
               "arrow '" + cat.arrow_name(al.f) + "' leaves element '" +
                   elems[dom][x] + "' unmapped");
        }
      }
      out.action[al.f] = std::move(table);
    }
    for (ArrId f = 0; f < cat.num_arrows(); ++f) {
      if (have_arrow[f]) continue;
      ObjId dom = contravariant ? cat.target(f) : cat.source(f);
      if (cat.is_identity(f)) {
        out.action[f].resize(out.sizes[dom]);
        for (int x = 0; x < out.sizes[dom]; ++x) out.action[f][x] = x;
      } else if (out.sizes[dom] > 0) {
        fail(ErrorKind::ParseError, start_line, 1,
             "no action listed for arrow '" + cat.arrow_name(f) + "'");
      }
    }
    return out;
  }

  void parse_functor(Cursor& cur) {
    Token name = cur.name("a functor name");
    cur.expect(":");
    Token cat_name = cur.name("a category name");
    cur.expect("->");
    cur.expect("finset");
    cur.finish();
    declare("functor", name, cur.line);
    const FinCategory& cat = resolve_category(cat_name, cur.line);
    ElementBody body = parse_elements(cat, cur.line, false);
    SetValuedFunctor f{name.text, std::move(body.sizes),
                       std::move(body.action)};
    FunctorialityReport report = validate_functor(cat, f);
    if (!report.valid) {
      fail(ErrorKind::ParseError, cur.line, 1,
           "functor '" + name.text + "': " + report.message);
    }
    ws_.functors.push_back({name.text, cat.name(), std::move(f)});
  }

  void parse_presheaf(Cursor& cur) {
    Token name = cur.name("a presheaf name");
    cur.expect("on");
    Token cat_name = cur.name("a category name");
    cur.finish();
    declare("presheaf", name, cur.line);
    const FinCategory& cat = resolve_category(cat_name, cur.line);
    ElementBody body = parse_elements(cat, cur.line, true);
    Presheaf p{name.text, std::move(body.sizes), std::move(body.action)};
    FunctorialityReport report = validate_presheaf(cat, p);
    if (!report.valid) {
      fail(ErrorKind::ParseError, cur.line, 1,
           "presheaf '" + name.text + "': " + report.message);
    }
    ws_.presheaves.push_back({name.text, cat.name(), std::move(p)});
  }
};

template <typename T>
const T& lookup(const std::vector<T>& items, const std::string& name,
                const char* kind) {
  for (const T& item : items) {
    if (item.name == name) return item;
  }
  throw Error(ErrorKind::UnresolvedReference,
              std::string("unknown ") + kind + " '" + name + "'");
}

}  // namespace

const FinCategory& Workspace::category(const std::string& name) const {
  for (const FinCategory& cat : categories) {
    if (cat.name() == name) return cat;
  }
  throw Error(ErrorKind::UnresolvedReference,
              "unknown category '" + name + "'");
}

const NamedTopology& Workspace::topology(const std::string& name) const {
  return lookup(topologies, name, "topology");
}

const NamedSite& Workspace::site(const std::string& name) const {
  return lookup(sites, name, "site");
}

const NamedFunctor& Workspace::functor(const std::string& name) const {
  return lookup(functors, name, "functor");
}

const NamedPresheaf& Workspace::presheaf(const std::string& name) const {
  return lookup(presheaves, name, "presheaf");
}

Workspace parse_workspace(const std::string& text, const Budget& budget) {
  return Parser(text, budget).run();
}

namespace {

void write_elements(std::ostream& out, const FinCategory& cat,
                    const std::vector<int>& sizes,
                    const std::vector<std::vector<int>>& action,
                    bool contravariant) {
  for (ObjId c = 0; c < cat.num_objects(); ++c) {
    out << "  on " << cat.object_name(c) << " = {";
    for (int x = 0; x < sizes[c]; ++x) out << " e" << x;
    out << " }\n";
  }
  for (ArrId f = 0; f < cat.num_arrows(); ++f) {
    if (cat.is_identity(f)) continue;
    ObjId dom = contravariant ? cat.target(f) : cat.source(f);
    out << "  on " << cat.arrow_name(f) << " :";
    for (int x = 0; x < sizes[dom]; ++x) {
      out << (x ? ", " : " ") << "e" << x << " -> e" << action[f][x];
    }
    out << "\n";
  }
}

}  // namespace

std::string serialize_workspace(const Workspace& ws) {
  std::ostringstream out;
  for (const FinCategory& cat : ws.categories) {
    CategorySpec spec = cat.to_spec();
    out << "category " << spec.name << "\n";
    out << "  objects:";
    for (const std::string& o : spec.objects) out << " " << o;
    out << "\n";
    for (const ArrowDecl& a : spec.arrows) {
      out << "  arrow " << a.name << " : " << a.source << " -> " << a.target
          << "\n";
    }
    for (const ComposeDecl& e : spec.equations) {
      out << "  compose " << e.outer << " " << e.inner << " = " << e.result
          << "\n";
    }
    out << "end\n\n";
  }
  for (const NamedTopology& t : ws.topologies) {
    const FinCategory& cat = ws.category(t.category);
    out << "topology " << t.name << " on " << t.category << "\n";
    for (ObjId c = 0; c < cat.num_objects(); ++c) {
      for (ArrowSet cover : t.topology.covers[c]) {
        out << "  cover " << cat.object_name(c) << " : {";
        for (ArrId f = 0; f < cat.num_arrows(); ++f) {
          if ((cover >> f) & 1) out << " " << cat.arrow_name(f);
        }
        out << " }\n";
      }
    }
    out << "end\n\n";
  }
  for (const NamedSite& s : ws.sites) {
    out << "site " << s.name << " = ( " << s.category << " , " << s.topology
        << " )\n\n";
  }
  for (const NamedFunctor& f : ws.functors) {
    const FinCategory& cat = ws.category(f.category);
    out << "functor " << f.name << " : " << f.category << " -> finset\n";
    write_elements(out, cat, f.functor.sizes, f.functor.action, false);
    out << "end\n\n";
  }
  for (const NamedPresheaf& p : ws.presheaves) {
    const FinCategory& cat = ws.category(p.category);
    out << "presheaf " << p.name << " on " << p.category << "\n";
    write_elements(out, cat, p.presheaf.sizes, p.presheaf.restrict_, true);
    out << "end\n\n";
  }
  return out.str();
}

}  // namespace sitekit
