#include "suropt/draws_io.hpp"

#include <fstream>
#include <sstream>

#include "suropt/csv.hpp"
#include "suropt/io.hpp"

namespace suropt {

std::string serialize_draws(const PosteriorDraws& draws) {
  draws.validate();
  std::string out = "# suropt-draws v1 scale=";
  out += draws.scale == CovariateScale::coded ? "coded" : "raw";
  for (int j = 0; j < 3; ++j) {
    const std::string tag = "x" + std::to_string(j + 1);
    out += " " + tag + "_center=" + format_double(draws.coding[static_cast<std::size_t>(j)].center);
    out += " " + tag + "_half=" + format_double(draws.coding[static_cast<std::size_t>(j)].half_range);
  }
  out += "\ndraw,chain";
  for (int k = 0; k < kNumCoeffs; ++k) out += ",b" + std::to_string(k);
  out += ",s11,s22,s12\n";
  for (Eigen::Index i = 0; i < draws.draws(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(draws.chain_id[static_cast<std::size_t>(i)]);
    for (int k = 0; k < kNumCoeffs; ++k) {
      out += ',';
      out += format_double(draws.beta(i, k));
    }
    for (int k = 0; k < 3; ++k) {
      out += ',';
      out += format_double(draws.sigma(i, k));
    }
    out += '\n';
  }
  return out;
}

PosteriorDraws parse_draws(std::string_view csv_text) {
  PosteriorDraws draws;
  std::vector<std::array<double, kNumCoeffs + 3>> rows;
  std::vector<int> chains;
  bool meta_seen = false;
  bool header_seen = false;

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= csv_text.size()) {
    const std::size_t eol = csv_text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? csv_text.substr(pos)
                                : csv_text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? csv_text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::string ctx = "draws row " + std::to_string(line_no);
    if (line.front() == '#') {
      // Metadata line: space-separated key=value tokens after the marker.
      std::istringstream ss{std::string(line.substr(1))};
      std::string token;
      while (ss >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        if (key == "scale") {
          if (value == "coded") {
            draws.scale = CovariateScale::coded;
          } else if (value == "raw") {
            draws.scale = CovariateScale::raw;
          } else {
            throw ValidationError(ctx + ": unknown scale '" + value + "'");
          }
          meta_seen = true;
        } else if (key.size() == 9 && key.compare(2, 7, "_center") == 0) {
          draws.coding[static_cast<std::size_t>(key[1] - '1')].center =
              parse_double(value, ctx);
        } else if (key.size() == 7 && key.compare(2, 5, "_half") == 0) {
          draws.coding[static_cast<std::size_t>(key[1] - '1')].half_range =
              parse_double(value, ctx);
        }
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;  // column header
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 2 + kNumCoeffs + 3) {
      throw ValidationError(ctx + ": expected " + std::to_string(2 + kNumCoeffs + 3) +
                            " fields, got " + std::to_string(fields.size()));
    }
    chains.push_back(static_cast<int>(parse_long(fields[1], ctx)));
    std::array<double, kNumCoeffs + 3> row{};
    for (int k = 0; k < kNumCoeffs + 3; ++k) {
      row[static_cast<std::size_t>(k)] =
          parse_double(fields[static_cast<std::size_t>(k + 2)], ctx);
    }
    rows.push_back(row);
  }
  if (!meta_seen || !header_seen || rows.empty()) {
    throw ValidationError("draws CSV: missing metadata, header, or rows");
  }

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  draws.beta.resize(n, kNumCoeffs);
  draws.sigma.resize(n, 3);
  draws.chain_id = std::move(chains);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    for (int k = 0; k < kNumCoeffs; ++k) draws.beta(i, k) = row[static_cast<std::size_t>(k)];
    for (int k = 0; k < 3; ++k) {
      draws.sigma(i, k) = row[static_cast<std::size_t>(kNumCoeffs + k)];
    }
  }
  draws.validate();
  return draws;
}

void save_draws(const std::string& path, const PosteriorDraws& draws) {
  write_file_atomic(path, serialize_draws(draws));
}

PosteriorDraws load_draws(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifactError("cannot open draws file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_draws(ss.str());
}

}  // namespace suropt
