#include "psflab/report.hpp"

#include <array>
#include <charconv>
#include <utility>

#include "json.hpp"

#include "psflab/version.hpp"

namespace psflab::report {
namespace {

// shortest round-trip rendering, locale-free
std::string fmt(double v) {
  std::array<char, 32> buf{};
  const auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), p);
}

}  // namespace

RunReport RunReport::from(std::string identity,
                          std::vector<std::pair<std::string, double>> params,
                          const engine::DualEvaluation& ev) {
  RunReport r;
  r.identity = std::move(identity);
  r.params = std::move(params);
  r.lhs = ev.lhs_value;
  r.rhs = ev.rhs_value;
  r.abs_discrepancy = ev.discrepancy;
  r.lhs_tail = ev.lhs_tail;
  r.rhs_tail = ev.rhs_tail;
  r.shells_lhs = ev.shells_lhs;
  r.shells_rhs = ev.shells_rhs;
  r.chosen_side = pairs::side_name(ev.chosen_side);
  r.passed = ev.passed;
  r.engine_version = kEngineVersion;
  return r;
}

std::string RunReport::json_line() const {
  nlohmann::ordered_json j;
  j["identity"] = identity;
  auto p = nlohmann::ordered_json::object();
  for (const auto& [key, val] : params) p[key] = val;
  j["params"] = std::move(p);
  j["lhs"] = {lhs.real(), lhs.imag()};
  j["rhs"] = {rhs.real(), rhs.imag()};
  j["abs_discrepancy"] = abs_discrepancy;
  j["lhs_tail"] = lhs_tail;
  j["rhs_tail"] = rhs_tail;
  j["shells_used"] = {shells_lhs, shells_rhs};
  j["chosen_side"] = chosen_side;
  j["passed"] = passed;
  j["wall_time_ms"] = wall_time_ms;
  j["engine_version"] = engine_version;
  return j.dump();
}

std::string RunReport::csv_header() {
  return "identity,params,lhs_re,lhs_im,rhs_re,rhs_im,abs_discrepancy,"
         "lhs_tail,rhs_tail,shells_lhs,shells_rhs,chosen_side,passed,"
         "wall_time_ms,engine_version";
}

std::string RunReport::csv_line() const {
  std::string p;
  for (const auto& [key, val] : params) {
    if (!p.empty()) p += ';';
    p += key;
    p += '=';
    p += fmt(val);
  }
  std::string out;
  out += identity;
  out += ',';
  out += p;
  out += ',';
  out += fmt(lhs.real());
  out += ',';
  out += fmt(lhs.imag());
  out += ',';
  out += fmt(rhs.real());
  out += ',';
  out += fmt(rhs.imag());
  out += ',';
  out += fmt(abs_discrepancy);
  out += ',';
  out += fmt(lhs_tail);
  out += ',';
  out += fmt(rhs_tail);
  out += ',';
  out += std::to_string(shells_lhs);
  out += ',';
  out += std::to_string(shells_rhs);
  out += ',';
  out += chosen_side;
  out += ',';
  out += passed ? "true" : "false";
  out += ',';
  out += fmt(wall_time_ms);
  out += ',';
  out += engine_version;
  return out;
}

}  // namespace psflab::report
