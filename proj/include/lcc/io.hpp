#pragma once

#include <iosfwd>
#include <string>

#include "lcc/family.hpp"
#include "lcc/instance.hpp"

namespace lcc {

/// LCCv1 text format:
///   LCCv1
///   field R|Q|Fp <p>
///   n <n> d <d> q <q> delta <decimal>
///   n vector lines of d entries (decimals, a/b fractions, or residues mod p)
///   per element: `m <k>` then k lines `i j k` of 1-based indices
void write_instance(std::ostream& out, const LccInstance& inst);
LccInstance read_instance(std::istream& in);
void write_instance_file(const std::string& path, const LccInstance& inst);
LccInstance read_instance_file(const std::string& path);

/// Family format: one `S <i>: j1 j2 ...` line per set followed by one
/// `P <a> <b> <i>` line per pair association, all 1-based.
void write_family(std::ostream& out, const ClusterFamily& family);
ClusterFamily read_family(std::istream& in);
void write_family_file(const std::string& path, const ClusterFamily& family);
ClusterFamily read_family_file(const std::string& path);

/// Shortest decimal that reads back as the same double.
std::string format_double(double x);

}  // namespace lcc
