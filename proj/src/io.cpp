#include "obsequiv/io.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace obsequiv {

namespace {

// JSON has no NaN or infinity; those become null.
nlohmann::ordered_json number(double v) {
  if (!std::isfinite(v))
    return nullptr;
  return v;
}

} // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

nlohmann::ordered_json to_json(const CheckItem &item) {
  nlohmann::ordered_json j;
  j["label"] = item.label;
  j["status"] = to_string(item.status);
  j["estimate"] = number(item.estimate);
  j["reference"] = number(item.reference);
  j["std_error"] = number(item.std_error);
  j["tolerance"] = number(item.tolerance);
  j["count"] = item.count;
  j["total"] = item.total;
  if (!item.witness.empty())
    j["witness"] = item.witness;
  return j;
}

nlohmann::ordered_json to_json(const CheckReport &report) {
  nlohmann::ordered_json j;
  j["check"] = report.check;
  j["verdict"] = to_string(report.verdict);
  auto items = nlohmann::ordered_json::array();
  for (const auto &it : report.items)
    items.push_back(to_json(it));
  j["items"] = std::move(items);
  j["seeds"] = report.seeds;
  j["N"] = report.samples;
  auto tol = nlohmann::ordered_json::object();
  for (const auto &[k, v] : report.tolerances)
    tol[k] = number(v);
  j["tolerances"] = std::move(tol);
  j["notes"] = report.notes;
  return j;
}

nlohmann::ordered_json report_document(const std::string &task, const CheckReport &report) {
  nlohmann::ordered_json j;
  j["schema"] = kReportSchema;
  j["task"] = task;
  j["report"] = to_json(report);
  return j;
}

void write_fdd_csv(std::ostream &out, const EmpiricalFDD &fdd) {
  std::string times;
  for (std::size_t i = 0; i < fdd.grid().size(); ++i)
    times += (i ? ";" : "") + format_double(fdd.grid()[i]);
  out << "times,symbols,count,estimate,stderr\n";
  for (std::size_t e = 0; e < fdd.events().size(); ++e) {
    std::string symbols;
    for (std::size_t i = 0; i < fdd.events()[e].size(); ++i)
      symbols += (i ? ";" : "") + fdd.alphabet()[fdd.events()[e][i]];
    out << times << ',' << symbols << ',' << fdd.count(e) << ','
        << format_double(fdd.probability(e)) << ',' << format_double(fdd.std_error(e)) << '\n';
  }
}

} // namespace obsequiv
