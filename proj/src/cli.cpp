#include "dstab/cli.hpp"

#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "dstab/bounds.hpp"
#include "dstab/certificates.hpp"
#include "dstab/oracle.hpp"
#include "dstab/predicates.hpp"

namespace dstab::cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;
constexpr std::size_t kDefaultSampleTrials = 1000;
constexpr std::size_t kDefaultVerifyTrials = 100;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RealMatrix load(const RunConfig& c) {
  if (c.input_path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return parse_matrix(buf.str(), c.format);
  }
  return read_matrix_file(c.input_path, c.format);
}

SearchOptions search_options(const RunConfig& c) {
  SearchOptions o;
  if (c.budget) o.budget = *c.budget;
  if (c.seed) o.seed = *c.seed;
  return o;
}

json certify(const RealMatrix& a, const RunConfig& c) {
  std::vector<SectorCertificate> certs;
  auto done = [&] { return !c.all && !certs.empty() && certs.back().certified(); };

  certs.push_back(dominance_certificate(a));
  if (!done()) certs.push_back(normal_pd_certificate(a));
  if (!done()) {
    certs.push_back(diagonal_sector_certificate(a, search_options(c)));
    if (!certs.back().certified() || c.all) certs.push_back(lyapunov_certificate(a, search_options(c)));
  }
  if (c.all && a.n() <= 20) certs.push_back(q2_certificate(a));

  json list = json::array();
  json selected = nullptr;
  for (const auto& cert : certs) {
    list.push_back(to_json(cert));
    if (selected.is_null() && cert.certified()) selected = std::string(to_string(cert.kind));
  }
  return {{"matrix_hash", content_digest(a)}, {"certificates", list}, {"selected", selected}};
}

json verify(const RealMatrix& a, const RunConfig& c, bool& inconsistent) {
  const std::size_t trials = c.trials.value_or(kDefaultVerifyTrials);
  const std::uint64_t seed = c.seed.value_or(kDefaultSeed);
  json j;
  j["matrix_hash"] = content_digest(a);

  auto attempt = [](auto&& body) -> json {
    try {
      return body();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::InternalConsistency) throw;
      return {{"skipped", std::string(to_string(e.code())) + ": " + e.what()}};
    }
  };

  j["superadditivity"] = attempt([&] {
    const auto r = verify_superadditivity(a, trials, seed);
    if (r.violations || r.expansion_mismatches) inconsistent = true;
    return to_json(r);
  });
  j["two_by_two"] = attempt([&] {
    const auto r = two_by_two_equivalence(a);
    if (!r.agree()) inconsistent = true;
    return to_json(r);
  });
  j["closure"] = attempt([&]() -> json {
    if (!c.theta) return {{"skipped", "needs --theta"}};
    const auto r = closure_checks(a, *c.theta, trials, seed, {c.threads});
    if (!r.all_pass()) inconsistent = true;
    return to_json(r);
  });
  const auto bounds = best_bound(a, search_options(c));
  if (!bounds.consistent()) inconsistent = true;
  j["bounds"] = {{"det_exact", bounds.det_exact}, {"violations", bounds.violations}};
  j["consistent"] = !inconsistent;
  return j;
}

void emit(const json& j, const RunConfig& c, std::ostream& out) {
  if (c.output == OutputFormat::Pretty) {
    out << pretty(j);
  } else {
    out << j.dump(2) << '\n';
  }
}

int fail(std::ostream& err, const Error& e, int status) {
  err << error_json(e).dump() << '\n';
  return status;
}

}  // namespace

std::optional<int> parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out,
                              std::ostream& err) {
  CLI::App app{"Sector stability analysis of real square matrices"};
  app.require_subcommand(1, 1);

  std::optional<double> theta;
  std::string format = "text", output = "json", mode = "mult";
  const std::map<std::string, Command> commands = {{"classify", Command::Classify},
                                                   {"certify", Command::Certify},
                                                   {"bound", Command::Bound},
                                                   {"sample", Command::Sample},
                                                   {"verify", Command::Verify}};
  const std::map<std::string, std::string> help = {
      {"classify", "matrix class memberships"},
      {"certify", "sector certificates for sigma(A)"},
      {"bound", "determinant upper bounds"},
      {"sample", "sample sigma(DA) or sigma(A - D) against a sector"},
      {"verify", "run the oracle checks"}};

  for (const auto& [name, cmd] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--input", config.input_path, "matrix file, '-' for stdin")->required();
    sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--theta", theta, "sector half-angle in [0, pi/2)");
    sub->add_option("--trials", config.trials, "number of trials")->check(CLI::PositiveNumber);
    sub->add_option("--seed", config.seed, "64-bit seed");
    sub->add_option("--mode", mode, "mult or add")->check(CLI::IsMember({"mult", "add"}));
    sub->add_option("--output", output, "json, csv or pretty")->check(CLI::IsMember({"json", "csv", "pretty"}));
    sub->add_flag("--all", config.all, "compute every applicable certificate");
    sub->add_option("--budget", config.budget, "search evaluation budget")->check(CLI::PositiveNumber);
    sub->add_option("--threads", config.threads, "worker threads for sampling")->check(CLI::Range(1u, 256u));
    sub->callback([&config, cmd] { config.command = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e, out, err);
    return status == 0 ? 0 : kExitParse;
  }

  config.format = format == "json" ? MatrixFormat::Json : MatrixFormat::Text;
  config.mode = mode == "add" ? ScalingMode::Additive : ScalingMode::Multiplicative;
  config.output = output == "csv" ? OutputFormat::Csv : output == "pretty" ? OutputFormat::Pretty : OutputFormat::Json;
  if (theta) {
    try {
      config.theta = SectorAngle::from_radians(*theta);
    } catch (const Error& e) {
      return fail(err, Error(ErrorCode::Parse, std::string("--theta: ") + e.what()), kExitParse);
    }
  }
  if (config.output == OutputFormat::Csv && config.command != Command::Sample) {
    return fail(err, Error(ErrorCode::Parse, "--output csv is only available for sample"), kExitParse);
  }
  return std::nullopt;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  RealMatrix a = RealMatrix::identity(1);
  try {
    a = load(c);
  } catch (const Error& e) {
    return fail(err, e, kExitParse);
  }

  try {
    bool inconsistent = false;
    json report;
    switch (c.command) {
      case Command::Classify:
        report = to_json(classify(a, c.theta));
        break;
      case Command::Certify:
        report = certify(a, c);
        break;
      case Command::Bound: {
        const auto r = best_bound(a, search_options(c));
        inconsistent = !r.consistent();
        report = to_json(r);
        break;
      }
      case Command::Sample: {
        if (!c.theta) throw Error(ErrorCode::InvalidArgument, "sample needs --theta");
        const std::size_t trials = c.trials.value_or(kDefaultSampleTrials);
        const std::uint64_t seed = c.seed.value_or(kDefaultSeed);
        if (c.output == OutputFormat::Csv) {
          write_spectrum_csv(out, a, *c.theta, c.mode, trials, seed);
          return kExitOk;
        }
        report = to_json(sample_scalings(a, *c.theta, c.mode, trials, seed, {c.threads}));
        break;
      }
      case Command::Verify:
        report = verify(a, c, inconsistent);
        break;
    }
    emit(report, c, out);
    if (inconsistent) {
      return fail(err, Error(ErrorCode::InternalConsistency, "a certified bound or identity check failed"),
                  kExitInternal);
    }
    return kExitOk;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Parse) return fail(err, e, kExitParse);
    if (e.code() == ErrorCode::InternalConsistency) return fail(err, e, kExitInternal);
    return fail(err, e, kExitPrecondition);
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  if (const auto status = parse_args(argc, argv, config, out, err)) return *status;
  return run(config, out, err);
}

}  // namespace dstab::cli
