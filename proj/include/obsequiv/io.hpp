#ifndef OBSEQUIV_IO_HPP
#define OBSEQUIV_IO_HPP

#include "obsequiv/fdd.hpp"
#include "obsequiv/report.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace obsequiv {

inline constexpr int kReportSchema = 1;

nlohmann::ordered_json to_json(const CheckItem &item);
nlohmann::ordered_json to_json(const CheckReport &report);

/// {"schema": 1, "task": ..., "report": {...}}. No timestamps, so equal
/// inputs give byte-identical output.
nlohmann::ordered_json report_document(const std::string &task, const CheckReport &report);

/// One row per event tuple: times, symbols, count, estimate, stderr. Lists
/// inside a cell are separated by ';'.
void write_fdd_csv(std::ostream &out, const EmpiricalFDD &fdd);

/// Shortest decimal text that round-trips the double.
std::string format_double(double v);

} // namespace obsequiv

#endif // OBSEQUIV_IO_HPP
