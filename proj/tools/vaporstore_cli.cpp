// Command-line front end. Talks to the library strictly through the public C
// API so it doubles as a smoke test of that surface.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <vaporstore/vaporstore.h>

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::string taus;
  std::string phases;
  bool design = false;
};

int fail_with(const char* context) {
  std::fprintf(stderr, "error: %s: %s\n", context, vs_last_error());
  return 1;
}

int run_verb(const std::string& verb, const Options& opt) {
  vs_config* cfg = nullptr;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path, std::ios::binary);
    if (!in) {
      std::fprintf(stderr, "error: cannot open config file '%s'\n", opt.config_path.c_str());
      return 1;
    }
    std::ostringstream text;
    text << in.rdbuf();
    if (vs_config_parse(text.str().c_str(), &cfg) != VS_OK) return fail_with("parsing config");
  } else {
    if (vs_config_default(&cfg) != VS_OK) return fail_with("building default config");
  }

  std::string out_dir = opt.out_dir;
  if (out_dir.empty()) {
    const char* env = std::getenv("VAPORSTORE_OUT");
    if (env && *env) out_dir = env;
  }

  int rc = 0;
  if (!opt.taus.empty() && vs_config_set(cfg, "taus_us", opt.taus.c_str()) != VS_OK)
    rc = fail_with("setting --taus");
  if (rc == 0 && !opt.phases.empty() && vs_config_set(cfg, "phases_rad", opt.phases.c_str()) != VS_OK)
    rc = fail_with("setting --phases");
  if (rc == 0 && opt.design && vs_config_set(cfg, "design", "true") != VS_OK)
    rc = fail_with("setting --design");
  if (rc == 0 && !out_dir.empty() && vs_config_set(cfg, "out_dir", out_dir.c_str()) != VS_OK)
    rc = fail_with("setting output directory");

  if (rc == 0 && vs_run(cfg, verb.c_str()) != VS_OK) rc = fail_with(verb.c_str());

  if (rc == 0) {
    char* text = nullptr;
    std::string where = "out";
    if (vs_config_serialize(cfg, &text) == VS_OK) {
      std::istringstream lines(text);
      std::string line;
      while (std::getline(lines, line))
        if (line.rfind("out_dir = ", 0) == 0) where = line.substr(10);
      vs_string_free(text);
    }
    std::printf("%s: wrote %s/manifest.txt\n", verb.c_str(), where.c_str());
  }
  vs_config_destroy(cfg);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diffusive image storage simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("vaporstore ") + vs_version());

  Options opt;
  std::string verb;
  const char* verbs[] = {"simulate", "sweep", "fit", "design", "traces"};
  const char* blurbs[] = {
      "Store a target and write the retrieved images per storage duration",
      "Write visibility-vs-duration curves",
      "Fit model parameters to a measured visibility curve",
      "Design region phases that survive storage and write the assignment",
      "Write probe input/output power traces",
  };
  for (std::size_t i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(verbs[i], blurbs[i]);
    sub->add_option("--config", opt.config_path, "Configuration file (key = value lines)");
    sub->add_option("--out", opt.out_dir, "Output directory (overrides VAPORSTORE_OUT and the config)");
    sub->add_option("--taus", opt.taus, "Storage durations in microseconds, comma separated");
    sub->add_option("--phases", opt.phases, "Region phases in radians, comma separated");
    sub->add_flag("--design", opt.design, "Use designed phases instead of the configured ones");
    sub->callback([&verb, name = std::string(verbs[i])]() { verb = name; });
  }

  CLI11_PARSE(app, argc, argv);
  return run_verb(verb, opt);
}
