from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

setup(
    ext_modules=[
        Pybind11Extension(
            "sitekit._core",
            sorted(
                [
                    "python/sitekit/_core.cpp",
                    "src/category.cpp",
                    "src/sieve.cpp",
                    "src/topology.cpp",
                    "src/sheaf.cpp",
                    "src/model.cpp",
                    "src/fraisse.cpp",
                    "src/dsl.cpp",
                    "src/cli.cpp",
                ]
            ),
            include_dirs=["include", "vendor"],
            cxx_std=20,
        )
    ],
    cmdclass={"build_ext": build_ext},
)
