#include <filesystem>
#include <fstream>
#include <sstream>

#include "jbtriple/harness.hpp"

namespace jbt {

json to_json(const VerificationReport& r) {
  return json{{"suite", r.suite},
              {"check", r.check},
              {"anchor", r.anchor},
              {"space", r.space},
              {"instance", r.instance},
              {"samples", r.samples},
              {"max_residual", r.max_residual},
              {"max_residual_hex", to_hex(r.max_residual)},
              {"mean_residual", r.mean_residual},
              {"mean_residual_hex", to_hex(r.mean_residual)},
              {"tolerance", r.tolerance},
              {"pass", r.pass},
              {"seed", r.seed},
              {"millis", r.millis}};
}

std::string csv_header() { return "suite,check,space,samples,max_residual,tolerance,pass,seed,millis"; }

namespace {

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string to_csv_row(const VerificationReport& r) {
  std::ostringstream os;
  os << quoted(r.suite) << ',' << quoted(r.check) << ',' << quoted(r.space) << ',' << r.samples << ','
     << number(r.max_residual) << ',' << number(r.tolerance) << ',' << (r.pass ? "true" : "false") << ',' << r.seed
     << ',' << number(r.millis);
  return os.str();
}

void write_reports(const std::vector<VerificationReport>& reports, const std::string& dir, const std::string& stem) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  const fs::path base = fs::path(dir) / stem;
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  std::ofstream js(base.string() + ".json");
  std::ofstream csv(base.string() + ".csv");
  if (!js || !csv) throw ConfigError("cannot write reports under " + dir);
  js << arr.dump(2) << '\n';
  csv << csv_header() << '\n';
  for (const auto& r : reports) csv << to_csv_row(r) << '\n';
  if (!js || !csv) throw ConfigError("write failed under " + dir);
}

int exit_status(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports)
    if (!r.pass && r.suite != "constants") return 1;
  return 0;
}

}  // namespace jbt
