#pragma once

#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ffcr/metrics.hpp"
#include "ffcr/pipeline.hpp"

namespace ffcr {

struct RunResult {
  double cfo_ppm = 0.0;
  BerReport ber;
  SndrReport sndr;
  std::int64_t pause_count = 0;
  double mean_pause_interval = std::numeric_limits<double>::quiet_NaN();  // cycles
  std::int64_t cycles = 0;
  std::string status = "ok";  // "ok" or the fault message
  std::uint64_t config_digest = 0;
  std::vector<CycleTrace> trace;

  bool faulted() const { return status != "ok"; }
};

inline std::string digest_hex(std::uint64_t d) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(d));
  return std::string(buf);
}

inline void write_trace_csv(std::ostream& os, const std::vector<CycleTrace>& trace) {
  os << "cycle,tau_code,phi_code,m,mu_code,en,fill\n";
  for (const auto& t : trace)
    os << t.cycle << ',' << t.tau_code << ',' << t.phi_code << ',' << t.m << ','
       << t.mu_code << ',' << t.en << ',' << t.fill << '\n';
}

inline void write_result_json(std::ostream& os, const RunResult& r) {
  nlohmann::json j;
  j["cfo_ppm"] = r.cfo_ppm;
  j["ber"] = r.ber.ber;
  j["errors"] = r.ber.errors;
  j["symbols"] = r.ber.symbols_counted;
  j["sndr_db"] = r.sndr.sndr_db;
  j["pause_count"] = r.pause_count;
  j["config_digest"] = digest_hex(r.config_digest);
  os << j.dump() << '\n';
}

inline void write_sweep_csv(std::ostream& os, const std::vector<RunResult>& results,
                            double symbol_rate_hz) {
  os.precision(10);
  os << "cfo_ppm,cfo_mhz,ber,log10_ber,sndr_db,pause_count,mean_pause_interval,status\n";
  for (const auto& r : results) {
    const double cfo_mhz = r.cfo_ppm * symbol_rate_hz * 1e-6 / 1e6;
    os << r.cfo_ppm << ',' << cfo_mhz << ',' << r.ber.ber << ',' << r.ber.log10_ber_or_floor
       << ',' << r.sndr.sndr_db << ',' << r.pause_count << ',' << r.mean_pause_interval
       << ',' << r.status << '\n';
  }
}

}  // namespace ffcr
