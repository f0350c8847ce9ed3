#include <iostream>

#include "CLI11.hpp"
#include "ppath/cli.hpp"

int main(int argc, char** argv) {
  using namespace ppath::cli;

  CLI::App app{"Parameter-path analysis and PPTB training"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train TD3-lite on the point-mass task and archive the policy path");
  t->add_option("--config", train.config, "RunConfig file (key = value)")->required();
  t->add_option("--out", train.out_dir, "Output directory")->required();
  t->add_option("--seeds", train.seeds, "Comma-separated seeds; one subdirectory per seed")->delimiter(',');

  ChangeArgs change;
  auto* c = app.add_subcommand("analyze-change", "Histograms of accumulated change and detour ratio");
  c->add_option("--archive", change.archive, "Path archive")->required();
  c->add_option("--out", change.out_dir, "Output directory")->required();
  c->add_option("--layer", change.layer, "Analyze one layer only");
  c->add_option("--top-fraction", change.top_fraction, "Keep the top fraction by accumulated change")
      ->capture_default_str();
  c->add_option("--clip-quantile", change.clip_quantile, "Drop values above this quantile")->capture_default_str();
  c->add_option("--bins", change.bins, "Histogram bins")->capture_default_str();

  SvdArgs svd;
  auto* s = app.add_subcommand("analyze-svd", "Temporal SVD profiles per layer and period");
  s->add_option("--archive", svd.archive, "Path archive")->required();
  s->add_option("--out", svd.out_dir, "Output directory")->required();
  s->add_option("--layer", svd.layer, "Analyze one layer only");
  s->add_option("--periods", svd.periods, "Number of contiguous periods")->capture_default_str();
  s->add_option("--beta-grid", svd.beta_grid, "Comma-separated thresholds")->delimiter(',');
  s->add_option("--directions", svd.directions, "Leading directions written as curves")->capture_default_str();

  ReconArgs recon;
  auto* r = app.add_subcommand("recon-check", "Return change after rank-r_t reconstruction of every snapshot");
  r->add_option("--archive", recon.archive, "Path archive")->required();
  r->add_option("--config", recon.config, "RunConfig used for training")->required();
  r->add_option("--out", recon.out_dir, "Output directory")->required();
  r->add_option("--rt-grid", recon.rt_grid, "Comma-separated ranks")->delimiter(',');
  r->add_option("--episodes", recon.episodes, "Evaluation episodes per snapshot");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (t->parsed()) return cmd_train(train, std::cerr);
  if (c->parsed()) return cmd_analyze_change(change, std::cerr);
  if (s->parsed()) return cmd_analyze_svd(svd, std::cerr);
  return cmd_recon_check(recon, std::cerr);
}
