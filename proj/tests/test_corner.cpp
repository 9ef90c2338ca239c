#include <doctest.h>

#include "movset/corner.hpp"
