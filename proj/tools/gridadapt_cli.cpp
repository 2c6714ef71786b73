// gridadapt command-line tool.
//
// Every subcommand writes `<output>.manifest.json` next to its main output
// with the resolved configuration and the exact argument vector; `replay`
// re-runs a manifest. Failures print one line to stderr:
//   gridadapt: error: kind=<kind> message="<text>"
// and exit with 2 for usage problems, 1 for runtime failures.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridadapt/adapt.hpp"
#include "gridadapt/distance_transform.hpp"
#include "gridadapt/dual.hpp"
#include "gridadapt/errors.hpp"
#include "gridadapt/eval.hpp"
#include "gridadapt/gdl_export.hpp"
#include "gridadapt/graph.hpp"
#include "gridadapt/image_io.hpp"
#include "gridadapt/parallel.hpp"
#include "gridadapt/render.hpp"
#include "gridadapt/serialize.hpp"
#include "gridadapt/sweep_config.hpp"
#include "gridadapt/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gridadapt;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Thrown for problems with the request itself (as opposed to the data).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c == '\n' ? ' ' : c);
  }
  return out;
}

int fail(const char* kind, const std::string& message, int code) {
  std::fprintf(stderr, "gridadapt: error: kind=%s message=\"%s\"\n", kind, escape(message).c_str());
  return code;
}

json manifestFor(const std::string& subcommand, const std::vector<std::string>& argv,
                 json config, json inputs, json outputs, json seeds = json::array()) {
  return {{"tool", "gridadapt"},
          {"version", GRIDADAPT_VERSION},
          {"manifest_version", 1},
          {"subcommand", subcommand},
          {"argv", argv},
          {"config", std::move(config)},
          {"inputs", std::move(inputs)},
          {"outputs", std::move(outputs)},
          {"seeds", std::move(seeds)}};
}

void writeManifest(const fs::path& output, const json& manifest) {
  writeJsonFile(fs::path(output.string() + ".manifest.json"), manifest);
}

std::optional<DetectorMethod> methodOr(const std::string& name) { return parseMethod(name); }

// ---------------------------------------------------------------------------
// Options shared between subcommands

struct AdaptOptions {
  std::size_t nodes = 100;
  std::string method = "robust";
  double lambda = 0.4;
  std::size_t samples = 0;
  double norm = 0.0;
  std::size_t maxIterations = 10;
  double residualThreshold = 0.1;
  bool noClamp = false;

  void add(CLI::App* cmd) {
    cmd->add_option("--nodes,-k", nodes, "Requested node count K (rounded to a square)");
    cmd->add_option("--method", method, "Salient point detector")
        ->check(CLI::IsMember({"robust", "slic"}));
    cmd->add_option("--lambda", lambda, "Regulariser / spatial weight")->check(CLI::NonNegativeNumber);
    cmd->add_option("--samples", samples, "Samples per edge (0: round(length) clamped to [10, 30])");
    cmd->add_option("--norm", norm, "Intensity normalisation N_c (0: image range)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-iterations,--max-iter", maxIterations, "Adaptation iteration cap");
    cmd->add_option("--residual,--rmax", residualThreshold, "Stop once the mean node move is below this (px)");
    cmd->add_flag("--no-clamp", noClamp, "Do not clamp nodes to the image extent");
  }

  AdaptConfig resolve(std::size_t threads) const {
    AdaptConfig cfg;
    cfg.maxIterations = maxIterations;
    cfg.residualThreshold = residualThreshold;
    cfg.clampToExtent = !noClamp;
    cfg.threads = threads;
    cfg.detector.method = *methodOr(method);
    cfg.detector.lambda = lambda;
    cfg.detector.samplesPerEdge = samples;
    if (norm > 0.0) cfg.detector.intensityNorm = norm;
    try {
      cfg.validate();
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

json adaptConfigJson(const AdaptConfig& cfg, std::size_t requestedNodes, std::size_t realized) {
  return {{"nodes_requested", requestedNodes},
          {"nodes", realized},
          {"max_iterations", cfg.maxIterations},
          {"residual_threshold", cfg.residualThreshold},
          {"clamp_to_extent", cfg.clampToExtent},
          {"threads", resolveThreadCount(cfg.threads)},
          {"detector", detectorToJson(cfg.detector)}};
}

// ---------------------------------------------------------------------------
// Subcommands

struct SynthCommand {
  std::string shape = "circle";
  std::size_t size = 128;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  fs::path output;
  std::optional<fs::path> contour;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("synth", "Generate a synthetic test image");
    cmd->add_option("--shape", shape, "Shape")
        ->check(CLI::IsMember({"diag", "flat", "corner", "circle", "vertical", "donut"}));
    cmd->add_option("--size", size, "Side length in pixels")->check(CLI::Range(16, 1 << 14));
    cmd->add_option("--sigma", sigma, "Noise sigma as a fraction of the maximum intensity")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--seed", seed, "Noise seed");
    cmd->add_option("--output,-o,--out", output, "Output image (.pgm or .png)")->required();
    cmd->add_option("--contour", contour, "Also write the ground-truth contour mask (0/255)");
  }

  void run(const std::vector<std::string>& argv) const {
    const SyntheticShape s{*parseShape(shape), size};
    saveImage(generateSynthetic(s, sigma, seed), output);
    json outputs = json::array({output.string()});
    if (contour) {
      const Image mask = groundTruthContour(s);
      std::vector<double> scaled(mask.data().begin(), mask.data().end());
      for (double& v : scaled) v *= 255.0;
      saveImage(Image(mask.dims(), scaled), *contour);
      outputs.push_back(contour->string());
    }
    writeManifest(output, manifestFor("synth", argv,
                                      {{"shape", shape}, {"size", size}, {"sigma", sigma},
                                       {"seed", seed}, {"noise_scale", kForegroundIntensity}},
                                      json::array(), outputs, json::array({seed})));
  }
};

struct AdaptCommand {
  fs::path input;
  fs::path output;
  AdaptOptions opts;

  void add(CLI::App& app, std::size_t& threads) {
    auto* cmd = app.add_subcommand("adapt", "Adapt a uniform triangulation to an image");
    cmd->add_option("--input,-i", input, "Input image")->required()->check(CLI::ExistingFile);
    cmd->add_option("--output,-o,--out", output, "Adapted graph JSON")->required();
    cmd->add_option("--threads", threads, "Worker threads (0: all; capped by GRIDADAPT_THREADS)");
    opts.add(cmd);
  }

  void run(const std::vector<std::string>& argv, std::size_t threads) const {
    const Image img = loadImage(input);
    const AdaptConfig cfg = opts.resolve(threads);
    const Graph initial = uniformTriangulation({opts.nodes, {img.width(), img.height()}});
    const AdaptResult result = adaptGraph(img, initial, cfg);
    writeJsonFile(output, adaptedToJson(result, cfg));
    json config = adaptConfigJson(cfg, opts.nodes, initial.nodeCount());
    config["intensity_norm_resolved"] = result.intensityNorm;
    writeManifest(output, manifestFor("adapt", argv, config, json::array({input.string()}),
                                      json::array({output.string()})));
  }
};

struct DualCommand {
  fs::path input;
  fs::path output;
  std::string pairing = "shared_face";
  double sMin = -1.0;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("dual", "Build the oversegmenting dual graph");
    cmd->add_option("--input,-i", input, "Adapted graph JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--output,-o,--out", output, "Dual graph JSON")->required();
    cmd->add_option("--pairing", pairing, "Which primal edge pairs become dual edges")
        ->check(CLI::IsMember({"shared_face", "shared_node"}));
    cmd->add_option("--s-min", sMin, "Keep only nodes with saliency above this (negative: keep all)");
  }

  void run(const std::vector<std::string>& argv) const {
    const AdaptResult adapted = adaptedFromJson(readJsonFile(input));
    const DualPairing p = *parsePairing(pairing);
    DualGraph dual = buildDual(adapted, p);
    if (sMin >= 0.0) dual = filterBySaliency(dual, sMin);
    writeJsonFile(output, dualToJson(dual, p));
    writeManifest(output, manifestFor("dual", argv, {{"pairing", pairing}, {"s_min", sMin}},
                                      json::array({input.string()}),
                                      json::array({output.string()})));
  }
};

struct EvalCommand {
  std::optional<fs::path> dual;
  std::optional<fs::path> contour;
  std::optional<std::string> shape;
  std::size_t size = 128;
  double percentile = 90.0;
  double dMin = 2.0;
  std::string lookup = "bilinear";
  std::optional<fs::path> config;
  fs::path output;
  bool quiet = false;

  void add(CLI::App& app, std::size_t& threads) {
    auto* cmd = app.add_subcommand(
        "eval", "Boundary recall of one dual graph, or a full sweep from a TOML config");
    auto* d = cmd->add_option("--dual", dual, "Dual graph JSON")->check(CLI::ExistingFile);
    auto* c = cmd->add_option("--contour", contour, "Contour mask image (nonzero = boundary)")
                  ->check(CLI::ExistingFile);
    auto* s = cmd->add_option("--shape", shape, "Use the ground-truth contour of a synthetic shape")
                  ->check(CLI::IsMember({"diag", "flat", "corner", "circle", "vertical", "donut"}));
    cmd->add_option("--size", size, "Synthetic shape size (with --shape)");
    cmd->add_option("--percentile", percentile,
                    "Saliency threshold as a percentile of the dual node saliencies")
        ->check(CLI::Range(0.0, 100.0));
    cmd->add_option("--d-min", dMin, "Distance (px) within which a point counts as on the boundary")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--edt-lookup", lookup, "Distance lookup at real-valued positions")
        ->check(CLI::IsMember({"bilinear", "nearest"}));
    auto* cfg = cmd->add_option("--config", config, "Sweep configuration (TOML)")
                    ->check(CLI::ExistingFile);
    cmd->add_option("--output,-o,--out", output, "Result JSON (single) or CSV (sweep)");
    cmd->add_option("--threads", threads, "Worker threads for sweeps");
    cmd->add_flag("--quiet,-q", quiet, "No progress counter");
    c->excludes(s);
    cfg->excludes(d)->excludes(c)->excludes(s);

    // `eval sweep --config f.toml --out r.csv` is the long spelling of `eval --config`.
    auto* sweep = cmd->add_subcommand("sweep", "Recall sweep driven by a TOML config");
    sweep->add_option("--config", config, "Sweep configuration (TOML)")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--output,-o,--out", output, "CSV output")->required();
    sweep->add_option("--threads", threads, "Worker threads");
    sweep->add_flag("--quiet,-q", quiet, "No progress counter");
  }

  void run(const std::vector<std::string>& argv, std::size_t threads) const {
    if (output.empty()) throw UsageError("eval needs --output");
    if (config) {
      runSweep(argv, threads);
    } else {
      runSingle(argv);
    }
  }

  void runSingle(const std::vector<std::string>& argv) const {
    if (!dual) throw UsageError("eval needs --dual or --config");
    if (!contour && !shape) throw UsageError("eval --dual needs --contour or --shape");
    const DualGraph d = dualFromJson(readJsonFile(*dual));
    Image mask;
    if (contour) {
      const Image raw = loadImage(*contour);
      std::vector<double> bin(raw.size());
      for (std::size_t i = 0; i < raw.size(); ++i) bin[i] = raw[i] > 0.0 ? 1.0 : 0.0;
      mask = Image(raw.dims(), bin);
    } else {
      mask = groundTruthContour({*parseShape(*shape), size});
    }
    const double sMin = saliencyPercentile(d, percentile);
    const EdtLookup mode = lookup == "nearest" ? EdtLookup::Nearest : EdtLookup::Bilinear;
    const RecallPoint p = recallAt(d, distanceTransform(mask), sMin, dMin, mode);
    const json result{{"s_min", sMin},
                      {"percentile", percentile},
                      {"d_min", dMin},
                      {"recall", p.recall ? json(*p.recall) : json(nullptr)},
                      {"total", p.totalCount},
                      {"positive", p.positiveCount}};
    writeJsonFile(output, result);
    std::cout << result.dump() << '\n';
    json inputs = json::array({dual->string()});
    if (contour) inputs.push_back(contour->string());
    writeManifest(output, manifestFor("eval", argv,
                                      {{"percentile", percentile},
                                       {"d_min", dMin},
                                       {"lookup", lookup},
                                       {"shape", shape ? json(*shape) : json(nullptr)},
                                       {"size", size}},
                                      inputs, json::array({output.string()})));
  }

  void runSweep(const std::vector<std::string>& argv, std::size_t threads) const {
    SweepConfig cfg;
    try {
      cfg = loadSweepConfig(*config);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
    if (threads > 0) cfg.threads = threads;
    const auto progress = [this](std::size_t done, std::size_t total) {
      if (!quiet) std::fprintf(stderr, "sweep %zu/%zu\n", done, total);
    };
    const SweepResult result = recallSweep(cfg.spec, cfg.threads, progress);
    std::vector<RecallCurve> all = result.cells;
    all.insert(all.end(), result.kAveraged.begin(), result.kAveraged.end());
    writeRecallCsv(output, all);
    json outputs = json::array({output.string()});
    if (cfg.csvPath && *cfg.csvPath != output) {
      writeRecallCsv(*cfg.csvPath, all);
      outputs.push_back(cfg.csvPath->string());
    }
    json resolved = sweepConfigToJson(cfg);
    resolved["threads"] = resolveThreadCount(cfg.threads);
    writeManifest(output, manifestFor("eval", argv, resolved, json::array({config->string()}),
                                      outputs, cfg.spec.recall.seeds));
  }
};

struct RenderCommand {
  fs::path image;
  fs::path graph;
  fs::path output;
  std::optional<fs::path> png;
  double dpi = 96.0;
  std::string colormap = "gray";
  std::string background = "image";
  std::vector<double> logRange{-15.0, 0.0};
  double strokeWidth = 1.0;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("render", "Draw a graph over its image as SVG (and PNG)");
    cmd->add_option("--image", image, "Background image")->required()->check(CLI::ExistingFile);
    cmd->add_option("--graph,-g", graph, "Graph, adapted graph or dual graph JSON")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--output,-o,--out", output, "SVG output")->required();
    cmd->add_option("--png", png, "Also rasterise to this PNG");
    cmd->add_option("--dpi", dpi, "PNG resolution (96 = one output pixel per image pixel)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--colormap", colormap, "Stroke colour map over log2 saliency")
        ->check(CLI::IsMember({"gray", "hot"}));
    cmd->add_option("--background", background, "Background layer")
        ->check(CLI::IsMember({"image", "white"}));
    cmd->add_option("--log-range", logRange, "log2 saliency mapped to the dark and bright ends")
        ->expected(2);
    cmd->add_option("--stroke-width", strokeWidth, "Line width in image pixels")
        ->check(CLI::PositiveNumber);
  }

  void run(const std::vector<std::string>& argv) const {
    RenderSpec spec;
    spec.colormap = colormap == "hot" ? Colormap::FixedColorRange : Colormap::GrayLog2;
    spec.background = background == "white" ? Background::White : Background::Image;
    spec.logLo = logRange.at(0);
    spec.logHi = logRange.at(1);
    spec.strokeWidth = strokeWidth;
    try {
      spec.validate();
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
    const Image img = loadImage(image);
    const json doc = readJsonFile(graph);
    const std::string kind = doc.value("kind", std::string{});
    EdgeSet edges;
    if (kind == "dual") {
      edges = edgeSet(dualFromJson(doc));
    } else if (kind == "adapted") {
      const AdaptResult r = adaptedFromJson(doc);
      edges = edgeSet(r.graph, &r.salientPoints);
    } else {
      edges = edgeSet(graphFromJson(doc));
    }
    renderGraph(img, edges, spec, output, png, dpi);
    json outputs = json::array({output.string()});
    if (png) outputs.push_back(png->string());
    writeManifest(output, manifestFor("render", argv,
                                      {{"colormap", colormap},
                                       {"background", background},
                                       {"log_range", logRange},
                                       {"stroke_width", strokeWidth},
                                       {"dpi", dpi},
                                       {"graph_kind", kind}},
                                      json::array({image.string(), graph.string()}), outputs));
  }
};

struct ExportCommand {
  std::vector<fs::path> inputs;
  std::optional<fs::path> idx;
  std::optional<fs::path> labels;
  std::size_t limit = 0;
  std::optional<fs::path> graph;
  std::string features = "both";
  fs::path output;
  AdaptOptions opts;

  void add(CLI::App& app, std::size_t& threads) {
    auto* cmd = app.add_subcommand(
        "export-gdl", "Adapt images and write graph-learning samples as JSON lines");
    auto* in = cmd->add_option("--input,-i", inputs, "Input image(s), one record each")
                   ->check(CLI::ExistingFile);
    auto* ix = cmd->add_option("--idx", idx, "IDX image file (MNIST layout)")->check(CLI::ExistingFile);
    cmd->add_option("--labels", labels, "IDX label file")->check(CLI::ExistingFile)->needs(ix);
    cmd->add_option("--limit", limit, "Use at most this many IDX images (0: all)");
    cmd->add_option("--graph,-g", graph, "Reuse an adapted graph JSON (single --input only)")
        ->check(CLI::ExistingFile)
        ->needs(in);
    cmd->add_option("--features", features, "Node features")
        ->check(CLI::IsMember({"intensity", "saliency", "both"}));
    cmd->add_option("--output,-o,--out", output, "JSON-lines dataset")->required();
    cmd->add_option("--threads", threads, "Worker threads (parallel over images)");
    in->excludes(ix);
    opts.nodes = 64;
    opts.add(cmd);
  }

  void run(const std::vector<std::string>& argv, std::size_t threads) const {
    if (inputs.empty() && !idx) throw UsageError("export-gdl needs --input or --idx");
    if (graph && inputs.size() != 1) throw UsageError("--graph needs exactly one --input");
    const NodeFeatures mode = *parseFeatures(features);

    std::vector<Image> images;
    std::vector<std::optional<int>> imageLabels;
    std::vector<std::string> ids;
    if (idx) {
      IdxDataset ds = readIdx(*idx, labels, limit);
      for (std::size_t i = 0; i < ds.images.size(); ++i) {
        ids.push_back(idx->filename().string() + ":" + std::to_string(i));
        imageLabels.push_back(ds.labels.empty() ? std::nullopt : std::optional(ds.labels[i]));
      }
      images = std::move(ds.images);
    } else {
      for (const auto& p : inputs) {
        images.push_back(loadImage(p));
        ids.push_back(p.filename().string());
        imageLabels.push_back(std::nullopt);
      }
    }

    // Images are processed in parallel, one thread each; records keep input order.
    const AdaptConfig cfg = opts.resolve(1);
    std::vector<GdlRecord> records(images.size());
    parallelFor(images.size(), resolveThreadCount(threads), [&](std::size_t i) {
      AdaptResult adapted;
      if (graph) {
        adapted = adaptedFromJson(readJsonFile(*graph));
      } else {
        const Image& img = images[i];
        adapted = adaptGraph(img, uniformTriangulation({opts.nodes, {img.width(), img.height()}}), cfg);
      }
      records[i] = makeGdlRecord(adapted, images[i], mode, ids[i], imageLabels[i]);
    });
    std::ofstream out(output, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + output.string() + "' for writing");
    for (const auto& r : records) writeGdlLine(out, r);
    out.close();
    if (!out) throw IoError("failed writing '" + output.string() + "'");

    json in = json::array();
    if (idx) in.push_back(idx->string());
    if (labels) in.push_back(labels->string());
    for (const auto& p : inputs) in.push_back(p.string());
    if (graph) in.push_back(graph->string());
    json config = adaptConfigJson(cfg, opts.nodes, realizedNodeCount(opts.nodes));
    config["features"] = features;
    config["records"] = records.size();
    config["limit"] = limit;
    config["threads"] = resolveThreadCount(threads);
    writeManifest(output, manifestFor("export-gdl", argv, config, in,
                                      json::array({output.string()})));
  }
};

int runArgs(const std::vector<std::string>& args);

struct ReplayCommand {
  fs::path manifest;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    cmd->add_option("manifest", manifest, "Manifest JSON")->required()->check(CLI::ExistingFile);
  }

  int run() const {
    const json m = readJsonFile(manifest);
    if (m.value("tool", std::string{}) != "gridadapt" || !m.contains("argv")) {
      throw IntegrityError("'" + manifest.string() + "' is not a gridadapt manifest");
    }
    const auto argv = m.at("argv").get<std::vector<std::string>>();
    if (argv.empty() || argv.front() == "replay") throw IntegrityError("manifest has no command");
    return runArgs(argv);
  }
};

int runArgs(const std::vector<std::string>& args) {
  CLI::App app{"gridadapt: feature-adapted graphs from images"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(GRIDADAPT_VERSION));

  std::size_t threads = 0;
  SynthCommand synth;
  AdaptCommand adapt;
  DualCommand dual;
  EvalCommand eval;
  RenderCommand render;
  ExportCommand exportGdl;
  ReplayCommand replay;
  synth.add(app);
  adapt.add(app, threads);
  dual.add(app);
  eval.add(app, threads);
  render.add(app);
  exportGdl.add(app, threads);
  replay.add(app);

  try {
    // CLI11 wants argv in reverse order for the vector overload.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitUsage);
  }

  try {
    if (app.got_subcommand("synth")) synth.run(args);
    if (app.got_subcommand("adapt")) adapt.run(args, threads);
    if (app.got_subcommand("dual")) dual.run(args);
    if (app.got_subcommand("eval")) eval.run(args, threads);
    if (app.got_subcommand("render")) render.run(args);
    if (app.got_subcommand("export-gdl")) exportGdl.run(args, threads);
    if (app.got_subcommand("replay")) return replay.run();
  } catch (const UsageError& e) {
    return fail("usage", e.what(), kExitUsage);
  } catch (const ParameterError& e) {
    return fail("parameter", e.what(), kExitUsage);
  } catch (const RangeError& e) {
    return fail("range", e.what(), kExitRuntime);
  } catch (const IoError& e) {
    return fail("io", e.what(), kExitRuntime);
  } catch (const IntegrityError& e) {
    return fail("integrity", e.what(), kExitRuntime);
  } catch (const EvaluationError& e) {
    return fail("evaluation", e.what(), kExitRuntime);
  } catch (const std::exception& e) {
    return fail("runtime", e.what(), kExitRuntime);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return runArgs(args);
}
