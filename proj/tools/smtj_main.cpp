#include "smtj/experiments.hpp"

int main(int argc, char** argv) { return smtj::cli_dispatch(argc, argv); }
