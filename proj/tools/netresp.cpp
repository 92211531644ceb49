#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "netresp/commands.hpp"

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("netresp");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("NETRESP_LOG")) spdlog::set_level(spdlog::level::from_str(level));

  CLI::App app{"Bayesian network-response regression"};
  app.require_subcommand(1);
  std::string config;
  netresp::CliOverrides o;
  std::string out;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string rk;
  for (const auto& name : netresp::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--rk", rk, "R = K, or a range A-B");
    sub->add_flag("--create", o.create, "create the output directory if missing");
    sub->add_flag("--resume", o.resume, "continue an interrupted fit from its checkpoint");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : netresp::kExitValidation;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  auto* sub = app.get_subcommand(command);
  if (sub->count("--seed")) o.seed = seed;
  if (sub->count("--out")) o.out = out;
  if (sub->count("--workers")) o.workers = workers;
  if (sub->count("--rk")) o.rk = rk;
  return netresp::dispatch(command, config, o, std::cerr);
}
