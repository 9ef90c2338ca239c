#include <doctest.h>

#include "movset/json_io.hpp"
