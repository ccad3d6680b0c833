import os
import sys

# Under ctest the freshly built module is used even when an editable install
# of the package is present.
build = os.environ.get("SKEWLS_PYTHON_BUILD")
if build:
    sys.meta_path[:] = [f for f in sys.meta_path if type(f).__name__ != "ScikitBuildRedirectingFinder"]
    sys.path.insert(0, build)
