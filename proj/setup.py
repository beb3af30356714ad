"""Builds the _braidrec extension by delegating to the project's CMake build."""

import shutil
import subprocess
import sys
from pathlib import Path

import pybind11
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        source_dir = Path(__file__).resolve().parent
        build_dir = Path(self.build_temp).resolve() / "cmake"
        build_dir.mkdir(parents=True, exist_ok=True)

        out_path = Path(self.get_ext_fullpath(ext.name)).resolve()
        out_path.parent.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                str(source_dir),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DBRAIDREC_BUILD_PYTHON=ON",
                "-DBRAIDREC_BUILD_TESTS=OFF",
                f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
                f"-DPYTHON_EXECUTABLE={sys.executable}",
            ],
            cwd=build_dir,
            check=True,
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_braidrec", "-j"],
            cwd=build_dir,
            check=True,
        )

        built = list(build_dir.glob("_braidrec*.so")) + list(build_dir.glob("_braidrec*.pyd"))
        if not built:
            raise RuntimeError("CMake did not produce the _braidrec extension")
        shutil.copy2(built[0], out_path)


setup(
    ext_modules=[CMakeExtension("braidrec._braidrec")],
    cmdclass={"build_ext": CMakeBuild},
)
