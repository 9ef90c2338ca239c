#include <doctest.h>

#include "movset/adjoint.hpp"
