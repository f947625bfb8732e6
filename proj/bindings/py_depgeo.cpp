#include <pybind11/pybind11.h>
PYBIND11_MODULE(_depgeo, m) { m.doc() = "placeholder"; }
