#include <catch2/catch_amalgamated.hpp>
// placeholder translation unit; real suite lands with its module
