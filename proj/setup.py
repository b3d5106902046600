from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "hgt_tools._hgt",
    [
        "src/python/hgt_module.cpp",
        "src/hgt/verify_axioms.cpp",
        "src/hgt/groupoid_suite.cpp",
    ],
    include_dirs=["src", "vendor", "/usr/include/eigen3"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
