#pragma once

#include "stfm/field.hpp"

#include <string>
#include <vector>

namespace stfm {

// Text formatting used by every emitter; %.17g round-trips doubles, which
// the byte-level reproducibility contract relies on.
std::string format_double(double v);

// CSV with rows "x,value".
std::string field_to_csv(const Field& f);
void write_field_csv(const Field& f, const std::string& path);
Field read_field_csv(const std::string& path, double L);

// Compact binary snapshot: magic "STFM", version u16, M u32, L f64,
// then M little-endian f64 values.
void write_snapshot(const Field& f, const std::string& path);
Field read_snapshot(const std::string& path);

// Diagnostics CSV, fixed header: t,mass,l2,h1,dx_l2,min,energy_residual
std::string diagnostics_to_csv(const std::vector<DiagnosticsRecord>& recs);
void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& recs,
                           const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace stfm
