#pragma once

#include <string>

#include "sosbound/sdp.hpp"

namespace sosbound {

/// Serialize in the sparse SDPA format (.dat-s). The file encodes the
/// standard SDPA primal  min c.x  s.t.  sum_i x_i F_i - F0 >= 0  under the
/// mapping F0 = -C, F_i = -A_i, c = -b, so the optimal value stored in the
/// file is the negative of this problem's maximum. Output is byte-stable for
/// a given problem.
std::string sdpa_string(const SdpProblem& prob);
void export_sdpa(const SdpProblem& prob, const std::string& path);

/// Reference parser for the same format; inverts the export mapping so that
/// import_sdpa(export_sdpa(p)) reproduces p.
SdpProblem import_sdpa_string(const std::string& text);
SdpProblem import_sdpa(const std::string& path);

}  // namespace sosbound
