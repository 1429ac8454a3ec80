#include <pybind11/pybind11.h>
PYBIND11_MODULE(_opasyn, m) { m.doc() = "placeholder"; }
