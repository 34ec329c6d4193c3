#include "hurwitz/cli.hpp"

int main(int argc, char** argv) { return hurwitz::cli::dispatch(argc, argv); }
