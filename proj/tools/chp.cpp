// chp: command-line driver for the porous-media Cahn-Hilliard toolkit.

#include <omp.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "chp/config.hpp"
#include "chp/errors.hpp"
#include "chp/run.hpp"

namespace {

struct Common {
  std::string config;
  std::string out;
  int threads = 0;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, Common& c, bool config_required) {
  auto* opt = sub->add_option("--config", c.config, "JSON run configuration");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  else opt->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output directory (overrides output.dir)");
  sub->add_option("--threads", c.threads, "OpenMP thread count")->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "seed for random initial data (overrides the config)");
}

chp::RunConfig load(const Common& c) {
  std::string text = "{}";
  if (!c.config.empty()) {
    std::ifstream is(c.config);
    if (!is) throw chp::ConfigError("cannot read " + c.config);
    std::ostringstream ss;
    ss << is.rdbuf();
    text = ss.str();
  }
  chp::RunConfig cfg = chp::parse_config(text);
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

int execute(chp::RunConfig cfg, const Common& c) {
  if (c.threads > 0) omp_set_num_threads(c.threads);
  const chp::RunReport rep = chp::run(cfg, c.out);
  for (const auto& l : rep.lines) std::cout << l << '\n';
  for (const auto& f : rep.files) std::cout << "wrote " << f << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogenized Cahn-Hilliard toolkit for porous media"};
  app.require_subcommand(1);

  Common cell, tens, macro, micro, cmp, chan, contact, checkf;
  auto* s_cell = app.add_subcommand("cell-solve", "solve the cell problems, write correctors and tensors");
  add_common(s_cell, cell, true);
  auto* s_tens = app.add_subcommand("tensors", "write the effective tensors only");
  add_common(s_tens, tens, true);
  auto* s_macro = app.add_subcommand("macro-run", "homogeneous or upscaled macro run");
  add_common(s_macro, macro, true);
  auto* s_micro = app.add_subcommand("micro-run", "perforated-domain run for each eps");
  add_common(s_micro, micro, true);
  auto* s_cmp = app.add_subcommand("compare", "micro runs against the upscaled run");
  add_common(s_cmp, cmp, true);
  auto* s_chan = app.add_subcommand("channel", "channel run with the upscaled wall datum g0");
  add_common(s_chan, chan, true);

  auto* s_contact = app.add_subcommand("contact-angle", "effective contact angle from g0");
  add_common(s_contact, contact, false);
  std::optional<double> g0, gamma, cahn;
  s_contact->add_option("--g0", g0, "upscaled wetting datum");
  s_contact->add_option("--gamma", gamma, "surface tension parameter");
  s_contact->add_option("--cahn", cahn, "Cahn number");

  auto* s_checkf = app.add_subcommand("check-f", "double-well admissibility check");
  add_common(s_checkf, checkf, false);
  std::optional<double> alpha1, alpha2;
  s_checkf->add_option("--alpha1", alpha1, "lower well");
  s_checkf->add_option("--alpha2", alpha2, "upper well");

  CLI11_PARSE(app, argc, argv);

  try {
    auto with = [](const Common& c, const std::string& scenario) {
      chp::RunConfig cfg = load(c);
      cfg.scenario = scenario;
      return cfg;
    };
    if (s_cell->parsed()) return execute(with(cell, "cell"), cell);
    if (s_tens->parsed()) return execute(with(tens, "tensors"), tens);
    if (s_macro->parsed()) {
      chp::RunConfig cfg = load(macro);
      if (cfg.scenario != "homogeneous" && cfg.scenario != "upscaled")
        cfg.scenario = cfg.tensor_file.empty() ? "homogeneous" : "upscaled";
      return execute(cfg, macro);
    }
    if (s_micro->parsed()) return execute(with(micro, "micro"), micro);
    if (s_cmp->parsed()) return execute(with(cmp, "compare"), cmp);
    if (s_chan->parsed()) return execute(with(chan, "channel"), chan);
    if (s_contact->parsed()) {
      chp::RunConfig cfg = with(contact, "contact-angle");
      if (g0) {
        cfg.contact.g0 = *g0;
        cfg.contact.from_channel = false;
      }
      if (gamma) cfg.wetting.spec.gamma = *gamma;
      if (cahn) cfg.wetting.spec.cahn = *cahn;
      return execute(cfg, contact);
    }
    if (s_checkf->parsed()) {
      chp::RunConfig cfg = with(checkf, "check-f");
      if (alpha1) cfg.check_alpha1 = *alpha1;
      if (alpha2) cfg.check_alpha2 = *alpha2;
      return execute(cfg, checkf);
    }
  } catch (const chp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
