#include <fstream>
#include <iostream>

#include "homext/runner.hpp"

#include "CLI11.hpp"

namespace {

void log_line(bool json_logs, const std::string& level, const std::string& msg) {
  if (json_logs) {
    nlohmann::json line{{"level", level}, {"msg", msg}};
    std::cerr << line.dump() << "\n";
  } else {
    std::cerr << "[" << level << "] " << msg << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise-affine boundary extensions and snowflake parametrizations"};
  app.footer("Commands: extend | energy | snowflake | verify | bound");

  std::string command, config_path, out_dir;
  std::uint64_t seed = 0;
  int depth = -1;
  double p = -1.0, beta = std::numeric_limits<double>::quiet_NaN();
  bool json_logs = false;

  app.add_option("command", command, "Command to run (may also come from --config)");
  app.add_option("--config", config_path, "JSON config file matching the RunConfig document");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Seed for all sampled diagnostics");
  app.add_option("--depth", depth, "Dyadic construction depth J");
  app.add_option("--p", p, "Exponent p (energy commands) or snowflake parameter");
  app.add_option("--beta", beta, "Weight exponent beta");
  app.add_flag("--json-logs", json_logs, "Emit structured log lines on stderr");

  CLI11_PARSE(app, argc, argv);

  try {
    homext::RunConfig config;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        log_line(json_logs, "error", "cannot open config file " + config_path);
        return 2;
      }
      nlohmann::json doc;
      in >> doc;
      config = homext::RunConfig::from_json(doc);
    }
    if (!command.empty()) config.command = command;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (app.count("--seed") > 0) config.seed = seed;
    if (depth >= 0) config.depth = depth;
    if (p >= 0.0) {
      if (config.command == "snowflake") config.snow_p = p;
      else config.p = p;
    }
    if (!std::isnan(beta)) config.beta = beta;
    config.json_logs = json_logs;

    log_line(json_logs, "info", "running command \"" + config.command + "\" -> " + config.out_dir);
    const int code = homext::run(config);
    if (code == 0) log_line(json_logs, "info", "done");
    else log_line(json_logs, "error", "property suite reported failures");
    return code;
  } catch (const homext::error& e) {
    nlohmann::json err{{"error", {{"code", homext::errc_name(e.code())}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", {{"code", "InternalError"}, {"message", e.what()}}}};
    std::cerr << err.dump() << "\n";
    return 2;
  }
}
