#include <doctest.h>

#include "movset/freearc.hpp"
