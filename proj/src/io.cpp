#include "dstab/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dstab {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::Parse, what); }

RealMatrix build(std::size_t n, const std::vector<double>& entries) {
  for (double v : entries) {
    if (!std::isfinite(v)) parse_error("matrix has a non-finite entry");
  }
  return RealMatrix(n, std::span<const double>(entries));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

RealMatrix parse_matrix_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  // First non-blank line holds n alone.
  long long n = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream head(line);
    std::string extra;
    if (!(head >> n) || (head >> extra)) parse_error("first line must hold only the dimension n");
    break;
  }
  if (n < 1) parse_error("dimension must be a positive integer");
  const auto dim = static_cast<std::size_t>(n);
  std::vector<double> entries;
  entries.reserve(dim * dim);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::string tok;
    std::size_t cols = 0;
    while (row >> tok) {
      // strtod, unlike stod, accepts subnormals; overflow shows up as inf.
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size()) parse_error("not a number: '" + tok + "'");
      entries.push_back(v);
      ++cols;
    }
    if (cols != dim) {
      parse_error("row " + std::to_string(rows) + " has " + std::to_string(cols) + " entries; expected " +
                  std::to_string(dim));
    }
    ++rows;
  }
  if (rows != dim) parse_error("expected " + std::to_string(dim) + " rows; got " + std::to_string(rows));
  return build(dim, entries);
}

RealMatrix parse_matrix_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("rows")) parse_error("expected {\"n\": int, \"rows\": [...]}");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1) parse_error("n must be a positive integer");
  const auto n = j["n"].get<std::size_t>();
  const json& rows = j["rows"];
  if (!rows.is_array() || rows.size() != n) parse_error("rows must be an array of n rows");
  std::vector<double> entries;
  entries.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != n) parse_error("row " + std::to_string(i) + " must have n entries");
    for (const auto& v : row) {
      if (!v.is_number()) parse_error("row " + std::to_string(i) + " has a non-numeric entry");
      entries.push_back(v.get<double>());
    }
  }
  return build(n, entries);
}

RealMatrix parse_matrix(std::string_view text, MatrixFormat format) {
  return format == MatrixFormat::Json ? parse_matrix_json(text) : parse_matrix_text(text);
}

RealMatrix read_matrix_file(const std::string& path, MatrixFormat format) {
  std::ifstream f(path, std::ios::binary);
  if (!f) parse_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_matrix(buf.str(), format);
}

std::string write_matrix_text(const RealMatrix& a) {
  std::string out = std::to_string(a.n()) + "\n";
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) {
      if (j) out += ' ';
      out += format_double(a(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string write_matrix_json(const RealMatrix& a) {
  std::string out = "{\"n\": " + std::to_string(a.n()) + ", \"rows\": [";
  for (std::size_t i = 0; i < a.n(); ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < a.n(); ++j) {
      if (j) out += ", ";
      out += format_double(a(i, j));
    }
    out += ']';
  }
  out += "]}\n";
  return out;
}

// ---------------------------------------------------------------------------

namespace {

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json theta_json(const SectorAngle& t) { return t.value(); }

}  // namespace

json to_json(const DiagonalScaling& d) { return json(d.values()); }

json to_json(const ClassReport& r) {
  json j;
  j["matrix_hash"] = r.matrix_hash;
  json verdicts = json::object();
  for (const auto& [name, v] : r.verdicts) verdicts[name] = std::string(to_string(v));
  j["verdicts"] = verdicts;
  json witnesses = json::object();
  for (const auto& [name, w] : r.witnesses) witnesses[name] = w;
  j["witnesses"] = witnesses;
  j["ratios"] = r.ratios ? json(*r.ratios) : json(nullptr);
  j["notes"] = r.notes;
  return j;
}

json to_json(const SectorCertificate& c) {
  json j;
  j["kind"] = std::string(to_string(c.kind));
  j["theta"] = theta_json(c.theta);
  j["theta_is_half_plane"] = c.theta.is_half_plane();
  j["d"] = c.d ? to_json(*c.d) : json(nullptr);
  j["status"] = std::string(to_string(c.status));
  json ev = json::object();
  for (const char* key : {"lambda_max_W", "norm_skew", "norm_sym_inv", "s_max"}) ev[key] = nullptr;
  for (const auto& [k, v] : c.evidence) ev[k] = v;
  j["evidence"] = ev;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json to_json(const BoundEntry& e) {
  json j;
  j["value"] = opt_number(e.value);
  j["theta_used"] = e.theta_used ? theta_json(*e.theta_used) : json(nullptr);
  j["applicable"] = e.applicable;
  j["certificate"] = e.certificate ? to_json(*e.certificate) : json(nullptr);
  j["note"] = e.note;
  return j;
}

json to_json(const BoundReport& r) {
  json j;
  j["det_exact"] = r.det_exact;
  json bounds = json::object();
  for (const char* name : kBoundNames) {
    const auto it = r.bounds.find(name);
    bounds[name] = it == r.bounds.end() ? json(nullptr) : to_json(it->second);
  }
  j["bounds"] = bounds;
  json tight = json::object();
  for (const auto& [name, t] : r.tightness) tight[name] = opt_number(t);
  j["tightness"] = tight;
  j["violations"] = r.violations;
  j["consistent"] = r.consistent();
  return j;
}

json to_json(const SamplingReport& r) {
  json j;
  j["trials"] = r.trials;
  j["violations"] = r.violations;
  j["worst_margin"] = r.worst_margin;
  j["seed"] = r.seed;
  j["mode"] = std::string(to_string(r.mode));
  j["theta"] = theta_json(r.theta);
  return j;
}

json to_json(const SuperadditivityReport& r) {
  return {{"trials", r.trials},
          {"violations", r.violations},
          {"expansion_mismatches", r.expansion_mismatches},
          {"worst_slack", r.worst_slack}};
}

json to_json(const ClosureReport& r) {
  json closures = json::object();
  for (const auto& [name, rep] : r.closures) closures[name] = to_json(rep);
  return {{"premise", to_json(r.premise)}, {"closures", closures}, {"all_pass", r.all_pass()}};
}

json to_json(const TwoByTwoReport& r) {
  return {{"criterion_det", r.criterion_det},
          {"criterion_grid", r.criterion_grid},
          {"agree", r.agree()},
          {"min_normalized_trace", r.min_normalized_trace},
          {"analytic_trace", r.analytic_trace},
          {"points", r.points}};
}

json error_json(const Error& e) {
  json j;
  j["error"] = std::string(to_string(e.code()));
  j["message"] = e.what();
  j["index"] = e.index() ? json(*e.index()) : json(nullptr);
  return j;
}

// ---------------------------------------------------------------------------

namespace {

json round6(const json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return j;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::strtod(buf, nullptr);
  }
  if (j.is_array() || j.is_object()) {
    json out = j;
    for (auto it = out.begin(); it != out.end(); ++it) *it = round6(*it);
    return out;
  }
  return j;
}

}  // namespace

std::string pretty(const json& j) { return round6(j).dump(2) + "\n"; }

}  // namespace dstab
