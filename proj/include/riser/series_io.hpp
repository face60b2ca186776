#pragma once

#include <filesystem>
#include <iosfwd>

#include "riser/diagnostics.hpp"

namespace riser {

/// Header row t,E,I_b,d_t,r,H,q,norm_u_sq,norm_v_sq,norm_uzz_sq,max_abs_u and
/// one row per record, every value printed with 17 significant digits.
void write_csv(std::ostream& out, const TimeSeries& series);
void write_csv(const std::filesystem::path& path, const TimeSeries& series);

/// Throws Error{MalformedCsv} on a wrong header, a short or unparsable row,
/// or non-increasing t.
TimeSeries read_csv(std::istream& in);
TimeSeries read_csv(const std::filesystem::path& path);

}  // namespace riser
