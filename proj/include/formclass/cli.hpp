#ifndef FORMCLASS_CLI_HPP
#define FORMCLASS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

// Command-line front end: classgroup, minpoly, primes and kronecker
// subcommands with JSON or text output and a disk cache for synthesized
// polynomials.
//
// Exit codes: 0 success, 1 invalid input or violated condition,
// 2 precision exhausted, 3 verification failure or internal inconsistency.
namespace formclass::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace formclass::cli

#endif
