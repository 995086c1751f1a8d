import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "mirrorent._kernels",
                ["src/mirrorent/_kernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

# The compiled kernels are an optional fast path; mirrorent._backend falls
# back to the pure-Python twin when the extension is unavailable.
setup(ext_modules=ext_modules)
