from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext_modules = [
    Pybind11Extension(
        "nblsat._core",
        sources=[
            "bindings/module.cpp",
            "src/cnf.cpp",
            "src/noise.cpp",
            "src/exact.cpp",
            "src/algorithms.cpp",
        ],
        include_dirs=["include"],
        cxx_std=20,
    ),
]

setup(ext_modules=ext_modules, cmdclass={"build_ext": build_ext})
