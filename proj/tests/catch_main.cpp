// Catch2 runner built from the system amalgamated distribution.
#include <catch2/catch_amalgamated.cpp>
