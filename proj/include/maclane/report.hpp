#pragma once

// Deterministic report serialization. Floating-point values are printed
// with %.17g so equal runs produce byte-identical files.

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "growth.hpp"
#include "hypercyclicity.hpp"

namespace maclane {

using OJson = nlohmann::ordered_json;

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_growth_csv(const GrowthReport& rep, std::ostream& os) {
  os << "r,log_mean,ratio,ratio_hi,J,tail_bound\n";
  for (const GrowthRow& row : rep.rows) {
    os << fmt_g17(row.r) << ',' << fmt_g17(row.log_mean) << ','
       << fmt_g17(row.ratio) << ',' << fmt_g17(row.ratio_hi) << ',' << row.J
       << ',' << fmt_g17(row.tail) << '\n';
  }
}

inline OJson growth_json(const GrowthReport& rep, const OJson& config) {
  OJson j;
  j["kind"] = "growth_report";
  j["config"] = config;
  j["p"] = std::isinf(rep.p) ? OJson("inf") : OJson(rep.p);
  j["a"] = rep.a;
  j["max_ratio"] = rep.max_ratio;
  j["max_ratio_hi"] = rep.max_ratio_hi;
  j["max_tail"] = rep.max_tail;
  j["rows"] = OJson::array();
  for (const GrowthRow& row : rep.rows) {
    OJson r;
    r["r"] = row.r;
    r["log_mean"] = row.log_mean;
    r["ratio"] = row.ratio;
    r["ratio_hi"] = row.ratio_hi;
    r["J"] = row.J;
    r["tail_bound"] = row.tail;
    j["rows"].push_back(std::move(r));
  }
  return j;
}

inline OJson visit_json(const VisitReport& rep) {
  OJson j;
  j["kind"] = "visit_report";
  j["k"] = rep.k;
  j["n"] = rep.n;
  j["s"] = rep.s;
  j["ell"] = rep.ell;
  j["sup_error"] = rep.sup_error;
  j["tolerance"] = rep.tolerance;
  j["s1_bound"] = rep.s1_bound;
  j["s2_bound"] = rep.s2_bound;
  j["pass"] = rep.pass;
  return j;
}

}  // namespace maclane
