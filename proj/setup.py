import glob
import os

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

eigen = os.environ.get("EIGEN3_INCLUDE_DIR", "/usr/include/eigen3")
# single-header dependencies; /opt/vendor mirrors the checked-out copies
vendor = "vendor" if os.path.exists("vendor/json.hpp") else "/opt/vendor"

ext = Pybind11Extension(
    "pfbhf._core",
    sorted(glob.glob("src/*.cpp")) + ["bindings/module.cpp"],
    include_dirs=["include", vendor, eigen],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
