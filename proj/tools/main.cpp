#include "roughfem/cli.hpp"

int main(int argc, char** argv) { return roughfem::run(argc, argv); }
