#include <iostream>

#include "projsplit/acceptance.hpp"

int main() { return projsplit::run_acceptance(std::cout) ? 0 : 1; }
