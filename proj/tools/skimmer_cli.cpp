// skimmer command-line entry point.
//
//   skimmer run <scenario.cfg|name> [--seed N] [--trace out.jsonl] [--csv out.csv]
//   skimmer list-scenarios
//   skimmer show-scenario <scenario.cfg|name> [--seed N]
//   skimmer metrics <scenario.cfg|name> <trace.jsonl>
//   skimmer serve <scenario.cfg|name> [--tcp PORT] [--ws PORT] [--speed X]
//   skimmer depth-eval --frames DIR --refs DIR --lambda L --alpha A --out DIR
//
// Exit status: 0 when every configured threshold passes, 1 when one fails,
// 2 for usage, configuration or input errors.

#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "skimmer/depth_eval.hpp"
#include "skimmer/harness.hpp"
#include "skimmer/line_format.hpp"
#include "skimmer/scenario.hpp"
#include "skimmer/trace.hpp"
#ifdef SKIMMER_HAVE_SERVER
#include "skimmer/server.hpp"
#endif

namespace {

constexpr int kExitPass = 0;
constexpr int kExitThresholdFail = 1;
constexpr int kExitError = 2;

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

skimmer::Scenario load(const std::string& ref, std::optional<std::uint64_t> seed) {
  skimmer::Scenario sc = skimmer::load_scenario(ref);
  if (seed) skimmer::apply_seed(sc, *seed);
  return sc;
}

int report(const skimmer::MetricsReport& metrics) {
  std::cout << skimmer::metrics_summary(metrics);
  const bool pass = metrics.all_pass();
  std::cout << (pass ? "all thresholds passed\n" : "threshold check FAILED\n");
  return pass ? kExitPass : kExitThresholdFail;
}

std::optional<skimmer::depth::CropRect> parse_crop(const std::string& text) {
  if (text.empty()) return std::nullopt;
  skimmer::depth::CropRect r;
  char tail = 0;
  unsigned long x = 0, y = 0, w = 0, h = 0;
  if (std::sscanf(text.c_str(), "%lu,%lu,%lu,%lu%c", &x, &y, &w, &h, &tail) != 4) {
    throw CLI::ValidationError("--crop", "expected X,Y,W,H");
  }
  r.x = x;
  r.y = y;
  r.width = w;
  r.height = h;
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skimmer: twin-thruster survey boat simulator and depth-map evaluator"};
  app.require_subcommand(1);

  std::string scenario_ref;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "Run a scenario headless and check its thresholds");
  std::string trace_path, csv_path, metrics_path;
  run->add_option("scenario", scenario_ref, "Scenario file or bundled scenario name")->required();
  run->add_option("--seed", seed, "Override the master seed and every seed derived from it");
  run->add_option("--trace", trace_path, "Write the per-tick trace as JSON lines");
  run->add_option("--csv", csv_path, "Write the per-tick trace as CSV");
  run->add_option("--metrics", metrics_path, "Write the metrics report as one JSON line");

  auto* list = app.add_subcommand("list-scenarios", "List the bundled scenarios");

  auto* show = app.add_subcommand("show-scenario", "Print a scenario with every value resolved");
  show->add_option("scenario", scenario_ref, "Scenario file or bundled scenario name")->required();
  show->add_option("--seed", seed, "Override the master seed");

  auto* metrics = app.add_subcommand("metrics", "Recompute metrics from a saved trace");
  std::string saved_trace;
  metrics->add_option("scenario", scenario_ref, "Scenario the trace was produced from")
      ->required();
  metrics->add_option("trace", saved_trace, "Trace file (JSON lines)")->required()->check(
      CLI::ExistingFile);

  auto* serve = app.add_subcommand("serve", "Run a scenario live and serve the telemetry link");
  std::uint16_t tcp_port = 14550;
  std::uint16_t ws_port = 8080;
  double speed = 1.0;
  std::string bind = "0.0.0.0";
  double serve_duration = 0.0;
  serve->add_option("scenario", scenario_ref, "Scenario file or bundled scenario name")->required();
  serve->add_option("--seed", seed, "Override the master seed");
  serve->add_option("--tcp", tcp_port, "TCP line-protocol port")->capture_default_str();
  serve->add_option("--ws", ws_port, "Websocket port (path /link)")->capture_default_str();
  serve->add_option("--speed", speed, "Simulated seconds per wall-clock second")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  serve->add_option("--bind", bind, "Listen address")->capture_default_str();
  serve->add_option("--trace", trace_path, "Write the trace on shutdown");
  serve->add_option("--wall-seconds", serve_duration,
                    "Stop after this many wall-clock seconds (0 = until interrupted)");

  auto* depth = app.add_subcommand("depth-eval", "Score precomputed depth maps");
  skimmer::depth::DepthEvalOptions dopt;
  std::string frames, refs, out, pseudo, feats, pre_feats, mask, crop;
  std::size_t width = 0, height = 0;
  depth->add_option("--frames", frames, "Directory of predicted depth maps")->required();
  depth->add_option("--refs", refs, "Directory of reference depth maps")->required();
  depth->add_option("--lambda", dopt.weights.lambda, "Weight of the alignment loss")->required();
  depth->add_option("--alpha", dopt.weights.alpha, "Cosine-similarity threshold")->required();
  depth->add_option("--out", out, "Output directory")->required();
  depth->add_option("--pseudo", pseudo, "Directory of pseudo-label maps (default: refs)");
  depth->add_option("--features", feats, "Directory of <stem>.feat feature sets");
  depth->add_option("--pre-features", pre_feats, "Directory of pretrained <stem>.feat sets");
  depth->add_option("--mask", mask, "CutMix region mask (0/1 text grid)");
  depth->add_option("--width", width, "Target width after resampling");
  depth->add_option("--height", height, "Target height after resampling");
  depth->add_option("--crop", crop, "Crop rectangle X,Y,W,H applied before resampling");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (*list) {
      for (const auto& name : skimmer::builtin_scenario_names()) std::cout << name << '\n';
      return kExitPass;
    }

    if (*show) {
      std::cout << skimmer::format_scenario(load(scenario_ref, seed));
      return kExitPass;
    }

    if (*run) {
      const skimmer::Scenario sc = load(scenario_ref, seed);
      const auto result = skimmer::run_scenario(sc);
      if (!trace_path.empty()) skimmer::write_trace_jsonl(trace_path, result.trace);
      if (!csv_path.empty()) skimmer::write_trace_csv(csv_path, result.trace);
      if (!metrics_path.empty()) {
        std::ofstream mout(metrics_path, std::ios::binary);
        mout << skimmer::metrics_line(result.metrics);
      }
      std::cout << "scenario " << sc.name << " (seed " << sc.seed << "), "
                << result.trace.size() << " ticks\n";
      for (const auto& tr : result.transitions) {
        std::cout << "  t=" << skimmer::format_real(tr.t_s) << "  " << skimmer::to_string(tr.from)
                  << " -> " << skimmer::to_string(tr.to) << "  (" << tr.reason << ")\n";
      }
      return report(result.metrics);
    }

    if (*metrics) {
      const skimmer::Scenario sc = load(scenario_ref, std::nullopt);
      const auto rows = skimmer::read_trace_file(saved_trace);
      return report(skimmer::compute_metrics(rows, skimmer::metrics_spec_for(sc)));
    }

    if (*serve) {
#ifdef SKIMMER_HAVE_SERVER
      skimmer::ServeOptions opts;
      opts.bind_address = bind;
      opts.tcp_port = tcp_port;
      opts.ws_port = ws_port;
      opts.speed = speed;
      skimmer::LiveServer server(load(scenario_ref, seed), opts);
      server.start();
      std::cout << "serving on tcp " << server.tcp_port() << ", ws " << server.ws_port()
                << " (/link), speed x" << speed << std::endl;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const auto started = std::chrono::steady_clock::now();
      while (!g_interrupted) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
        if (serve_duration > 0.0 &&
            std::chrono::steady_clock::now() - started >= std::chrono::duration<double>(serve_duration)) {
          break;
        }
      }
      server.stop();
      const auto stats = server.stats();
      std::cout << "stopped after " << stats.ticks << " ticks, " << stats.clients_seen
                << " clients, " << stats.lines_in << " lines in, " << stats.decode_errors
                << " undecodable, " << stats.refused_commands << " refused\n";
      if (!trace_path.empty()) skimmer::write_trace_jsonl(trace_path, server.trace());
      return report(server.final_metrics());
#else
      std::cerr << "this build has no live server (configure with SKIMMER_BUILD_SERVER=ON)\n";
      return kExitError;
#endif
    }

    if (*depth) {
      dopt.frames_dir = frames;
      dopt.refs_dir = refs;
      dopt.out_dir = out;
      if (!pseudo.empty()) dopt.pseudo_dir = pseudo;
      if (!feats.empty()) dopt.features_dir = feats;
      if (!pre_feats.empty()) dopt.pre_features_dir = pre_feats;
      if (!mask.empty()) dopt.mask_path = mask;
      if (width) dopt.width = width;
      if (height) dopt.height = height;
      dopt.crop = parse_crop(crop);
      const auto result = skimmer::depth::run_depth_eval(dopt);
      std::cout << skimmer::depth::metrics_csv(result.frames);
      std::cout << "wrote " << result.frames.size() << " frames to " << out << '\n';
      return kExitPass;
    }
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
