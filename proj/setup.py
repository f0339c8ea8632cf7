"""CMake bridge: setuptools drives the CMake build of the pybind11 extension.

Metadata lives in pyproject.toml. Requires a CMake-visible compiler and the
build deps installed in the active environment (install with
--no-build-isolation).
"""

import subprocess
import sys
from pathlib import Path

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        import pybind11

        extdir = Path(self.get_ext_fullpath(ext.name)).resolve().parent
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve()
        build_dir.mkdir(parents=True, exist_ok=True)
        cfg = "Debug" if self.debug else "Release"
        subprocess.run(
            [
                "cmake",
                str(source_dir),
                f"-DCMAKE_BUILD_TYPE={cfg}",
                "-DTRAJCAST_BUILD_TESTS=OFF",
                "-DTRAJCAST_BUILD_CLI=OFF",
                "-DTRAJCAST_BUILD_PYTHON=ON",
                f"-DTRAJCAST_PY_EXT_DIR={extdir}",
                f"-DPython_EXECUTABLE={sys.executable}",
                f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--parallel", "--target", "trajcast_py"],
            cwd=build_dir,
            check=True,
        )


setup(ext_modules=[CMakeExtension("trajcast._core")], cmdclass={"build_ext": CMakeBuild})
