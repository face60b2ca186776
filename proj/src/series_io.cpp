#include "riser/series_io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "riser/error.hpp"

namespace riser {

namespace {

constexpr std::size_t kColumns = std::size(kRecordColumns);

std::string header_line() {
  std::string h;
  for (std::size_t i = 0; i < kColumns; ++i) {
    if (i) h += ',';
    h += kRecordColumns[i];
  }
  return h;
}

std::array<double, kColumns> fields(const DiagnosticsRecord& r) {
  return {r.t, r.E, r.I_b, r.d_t, r.r, r.H, r.q, r.norm_u_sq, r.norm_v_sq, r.norm_uzz_sq, r.max_abs_u};
}

DiagnosticsRecord from_fields(const std::array<double, kColumns>& f) {
  return {f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8], f[9], f[10]};
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

void write_csv(std::ostream& out, const TimeSeries& series) {
  out << header_line() << '\n';
  fmt::memory_buffer buf;
  for (const auto& rec : series.records) {
    buf.clear();
    const auto vals = fields(rec);
    for (std::size_t i = 0; i < kColumns; ++i) {
      if (i) buf.push_back(',');
      fmt::format_to(std::back_inserter(buf), "{:.17g}", vals[i]);
    }
    buf.push_back('\n');
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
}

void write_csv(const std::filesystem::path& path, const TimeSeries& series) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write {}", path.string()));
  write_csv(out, series);
  if (!out) throw Error(ErrorCode::Io, fmt::format("write to {} failed", path.string()));
}

TimeSeries read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedCsv, "CSV is empty");
  if (strip_cr(line) != header_line()) {
    throw Error(ErrorCode::MalformedCsv, fmt::format("unexpected CSV header '{}'", strip_cr(line)));
  }
  TimeSeries series;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(line);
    if (line.empty()) continue;
    std::array<double, kColumns> vals{};
    std::size_t col = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (true) {
      const char* comma = std::find(p, end, ',');
      if (col >= kColumns) {
        throw Error(ErrorCode::MalformedCsv, fmt::format("line {}: too many columns", lineno));
      }
      double v = 0.0;
      std::string cell(p, comma);
      std::size_t used = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size()) {
        throw Error(ErrorCode::MalformedCsv,
                    fmt::format("line {}: cannot parse '{}' in column {}", lineno, cell,
                                kRecordColumns[col]));
      }
      vals[col++] = v;
      if (comma == end) break;
      p = comma + 1;
    }
    if (col != kColumns) {
      throw Error(ErrorCode::MalformedCsv,
                  fmt::format("line {}: expected {} columns, got {}", lineno, kColumns, col));
    }
    if (!series.records.empty() && !(vals[0] > series.records.back().t)) {
      throw Error(ErrorCode::MalformedCsv, fmt::format("line {}: t is not increasing", lineno));
    }
    series.records.push_back(from_fields(vals));
  }
  return series;
}

TimeSeries read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open {}", path.string()));
  return read_csv(in);
}

}  // namespace riser
