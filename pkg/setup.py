"""Optional compiled twin of the evaluator.

The NbE kernel (`tltt/nbe_core.py`) is a single source file written in the
subset Cython's pure-Python mode accepts.  When Cython and a C compiler
are available we compile that same source as the extension module
``tltt._nbe_compiled``; ``tltt.nbe`` picks it up at import time and falls
back to the interpreted module otherwise.  Installation works fine without
Cython - the package is pure Python then.
"""

from pathlib import Path

from setuptools import setup

HERE = Path(__file__).resolve().parent
KERNEL = HERE / "src" / "tltt" / "nbe_core.py"
TWIN_DIR = HERE / "build" / "cython_twin"
TWIN = TWIN_DIR / "_nbe_compiled.py"


def extensions():
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    TWIN_DIR.mkdir(parents=True, exist_ok=True)
    text = "# generated from src/tltt/nbe_core.py - do not edit\n" + KERNEL.read_text()
    if not TWIN.exists() or TWIN.read_text() != text:
        TWIN.write_text(text)
    return cythonize(
        [Extension("tltt._nbe_compiled", [str(TWIN.relative_to(HERE))])],
        language_level="3",
    )


setup(ext_modules=extensions())
