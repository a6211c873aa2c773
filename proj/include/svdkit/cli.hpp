#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "svdkit/svd.hpp"

namespace svdkit::cli {

enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kParse = 2,
  kSemantic = 3,
  kPrecondition = 4,
  kInvariant = 5,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`; files land in --out when given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string map_csv(const SvdGraph& g, const SvdMap& m);
/// 16-bit big-endian P5 over the node lattice, top row = largest y.
std::string map_pgm(const SvdGraph& g, const SvdMap& m);
std::string map_svg(const SvdGraph& g, const SvdMap& m);

}  // namespace svdkit::cli
