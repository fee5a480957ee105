#pragma once

// Text formats for DSet and PairSet files.
//
//   #dlab v1 base=<R|Qp> p=<p|-> d=<d> m=<m> Rexp=<r> [kind=pairs] [poly=c0,..,cd] [tool=.. config=..]
//   one point per line, d (or 2d) space-separated integers
//
// `config=` swallows the rest of the line so it can carry arbitrary JSON.

#include <string>

#include "core/dset.hpp"

namespace dlab {

struct SetHeader {
  std::string tool;    // written as tool=<version> when nonempty
  std::string config;  // written as config=<text> when nonempty
};

std::string header_line(const PointSet& a, bool pairs, const SetHeader& extra = {});
std::string to_text(const DSet& a, const SetHeader& extra = {});
std::string to_text(const PairSet& g, const SetHeader& extra = {});

DSet dset_from_text(const std::string& text);
PairSet pairs_from_text(const std::string& text);

DSet read_dset(const std::string& path);
PairSet read_pairs(const std::string& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace dlab
