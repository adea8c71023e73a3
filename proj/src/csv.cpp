#include "suropt/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace suropt {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    std::string_view field = (comma == std::string_view::npos)
                                 ? line.substr(start)
                                 : line.substr(start, comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    fields.emplace_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view token, const std::string& context) {
  std::string buf(token);
  if (buf.empty()) throw ValidationError(context + ": empty numeric field");
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) {
    throw ValidationError(context + ": malformed number '" + buf + "'");
  }
  return v;
}

long parse_long(std::string_view token, const std::string& context) {
  std::string buf(token);
  errno = 0;
  char* end = nullptr;
  long v = std::strtol(buf.c_str(), &end, 10);
  if (buf.empty() || end != buf.c_str() + buf.size() || errno == ERANGE) {
    throw ValidationError(context + ": malformed integer '" + buf + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

constexpr std::string_view kHeader = "machine,x1,x2,x3,roughness,power";

}  // namespace

Dataset parse_dataset(std::string_view csv_text, const Factors& factors) {
  std::vector<ExperimentalRun> runs;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (pos <= csv_text.size()) {
    std::size_t eol = csv_text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? csv_text.substr(pos)
                                : csv_text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? csv_text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      auto fields = split_csv_line(line);
      if (fields.size() != 6 || fields[0] != "machine" || fields[1] != "x1" ||
          fields[2] != "x2" || fields[3] != "x3" || fields[4] != "roughness" ||
          fields[5] != "power") {
        throw ValidationError("row 1: expected header '" + std::string(kHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const std::string ctx = "row " + std::to_string(line_no);
    auto fields = split_csv_line(line);
    if (fields.size() != 6) {
      throw ValidationError(ctx + ": expected 6 fields, got " + std::to_string(fields.size()));
    }
    ExperimentalRun run;
    run.machine = machine_from_tag(fields[0]);
    run.x1 = parse_double(fields[1], ctx);
    run.x2 = parse_double(fields[2], ctx);
    run.x3 = parse_double(fields[3], ctx);
    run.roughness = parse_double(fields[4], ctx);
    run.power = parse_double(fields[5], ctx);
    if (run.roughness <= 0.0 || run.power <= 0.0) {
      throw ValidationError(ctx + ": non-positive response");
    }
    runs.push_back(run);
  }
  if (!header_seen) throw ValidationError("empty CSV: header row required");
  return make_dataset(std::move(runs), factors);
}

std::string serialize_dataset(const Dataset& dataset) {
  std::string out(kHeader);
  out += '\n';
  for (const auto& run : dataset.runs) {
    out += machine_tag(run.machine);
    out += ',';
    out += format_double(run.x1);
    out += ',';
    out += format_double(run.x2);
    out += ',';
    out += format_double(run.x3);
    out += ',';
    out += format_double(run.roughness);
    out += ',';
    out += format_double(run.power);
    out += '\n';
  }
  return out;
}

Dataset load_dataset(const std::string& path, const Factors& factors) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("cannot open dataset file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str(), factors);
}

}  // namespace suropt
