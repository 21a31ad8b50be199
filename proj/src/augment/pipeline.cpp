#include "airgan/augment/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <optional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "airgan/core/error.hpp"
#include "airgan/core/wav.hpp"
#include "airgan/estimation/encoder.hpp"
#include "airgan/estimation/excitation_bank.hpp"
#include "airgan/gan/checkpoint.hpp"
#include "airgan/gan/distribution.hpp"
#include "airgan/gan/gan.hpp"
#include "airgan/synthesis/synthesis.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace airgan::augment {

std::mutex Log::mutex_;
Log::Sink Log::sink_;

void Log::set_sink(Sink sink) {
  std::lock_guard lock(mutex_);
  sink_ = std::move(sink);
}

void Log::line(const std::string& text) {
  std::lock_guard lock(mutex_);
  if (sink_) {
    sink_(text);
  } else {
    std::cerr << text << '\n';
  }
}

namespace {

fs::path suffixed(const fs::path& stem, const char* suffix) { return stem.string() + suffix; }

// Collects failures from worker threads; each is logged as it happens.
class Failures {
 public:
  void add(const std::string& what) {
    Log::line("error: " + what);
    std::lock_guard lock(mutex_);
    items_.push_back(what);
  }
  std::vector<std::string> take() {
    std::lock_guard lock(mutex_);
    std::sort(items_.begin(), items_.end());
    return std::move(items_);
  }

 private:
  std::mutex mutex_;
  std::vector<std::string> items_;
};

void prepare_out(const RunConfig& cfg) {
  fs::create_directories(cfg.out);
  cfg.write(Layout{cfg.out}.effective_config());
}

void reset_dir(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
}

// Rooms for stages that start from the output tree: the manifest when one
// is configured, else the explicit list, else every encoded room.
std::vector<std::string> resolve_rooms(const RunConfig& cfg) {
  if (!cfg.manifest.empty() && fs::is_regular_file(cfg.manifest)) {
    return select_rooms(cfg, DatasetManifest::read(cfg.manifest));
  }
  if (!cfg.rooms.empty()) return cfg.rooms;
  std::vector<std::string> rooms;
  const fs::path reps = cfg.out / "reps";
  if (fs::is_directory(reps)) {
    for (const auto& e : fs::directory_iterator(reps)) {
      if (e.is_directory()) rooms.push_back(e.path().filename().string());
    }
  }
  std::sort(rooms.begin(), rooms.end());
  if (rooms.empty()) throw PreconditionError("no rooms: no manifest and nothing under " + reps.string());
  return rooms;
}

std::vector<LowDimRep> read_reps(const fs::path& dir) {
  std::vector<LowDimRep> reps;
  for (const auto& f : rep_files(dir)) reps.push_back(read_rep(f));
  return reps;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

struct RoomEncode {
  std::size_t airs = 0;
  std::size_t encoded = 0;
  std::vector<double> t60;
  std::vector<double> reflections;
};

RoomEncode encode_room(const RunConfig& cfg, const DatasetManifest& manifest, const std::string& room,
                       Failures& failures, std::atomic<std::size_t>& written) {
  const Layout layout{cfg.out};
  RoomEncode out;
  const auto entries = manifest.entries_for(room);
  out.airs = entries.size();

  std::vector<AirSignal> airs;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    try {
      airs.push_back(load_dataset_air(entries[i]));
      std::ostringstream name;
      name << i << '_' << entries[i].path.stem().string();
      names.push_back(name.str());
    } catch (const std::exception& e) {
      failures.add(entries[i].path.string() + ": " + e.what());
    }
  }
  if (airs.size() < 2) {
    failures.add(room + ": the excitation bank needs at least two loadable AIRs");
    return out;
  }

  ExcitationBank bank;
  try {
    bank = build_excitation_bank(airs);
    fs::create_directories(layout.bank(room).parent_path());
    bank.write(layout.bank(room));
    const auto back = ExcitationBank::read(layout.bank(room));
    if (back.excitations.size() != bank.excitations.size() || back.window_len != bank.window_len) {
      throw Error("bank read-back mismatch");
    }
    ++written;
  } catch (const std::exception& e) {
    failures.add(room + ": excitation bank: " + e.what());
    return out;
  }

  reset_dir(layout.reps(room));
  for (std::size_t i = 0; i < airs.size(); ++i) {
    const fs::path path = layout.reps(room) / (names[i] + ".rep.csv");
    try {
      const auto enc = encode(airs[i], bank.window_len);
      write_rep(path, enc.rep);
      const auto back = read_rep(path);
      if (!(back == enc.rep)) throw Error("read-back mismatch");
      if (!back.valid()) throw Error("encoded rep is invalid");
      ++written;
      ++out.encoded;
      out.t60.push_back(back.t60());
      out.reflections.push_back(static_cast<double>(back.reflection_count()));
    } catch (const std::exception& e) {
      failures.add(room + "/" + names[i] + ": " + e.what());
    }
  }
  Log::line("encode " + room + ": " + std::to_string(out.encoded) + "/" + std::to_string(out.airs));
  return out;
}

// True when `stem` holds a finished run of `g` newer than every rep file.
bool checkpoint_current(const fs::path& stem, const gan::GanConfig& g,
                        const std::vector<fs::path>& reps) {
  const fs::path json_path = suffixed(stem, ".json");
  if (!fs::exists(json_path)) return false;
  try {
    const auto model = gan::load_gan(stem);
    std::ifstream in(json_path);
    const auto j = nlohmann::json::parse(in);
    if (!(model.config == g) || j.at("epochs_trained").get<int>() != g.epochs) return false;
    const auto stamp = fs::last_write_time(json_path);
    for (const auto& r : reps) {
      if (fs::last_write_time(r) > stamp) return false;
    }
    return fs::exists(suffixed(stem, ".history.csv"));
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

std::vector<std::string> select_rooms(const RunConfig& cfg, const DatasetManifest& manifest) {
  if (cfg.rooms.empty()) return manifest.rooms();
  for (const auto& r : cfg.rooms) {
    if (std::find(manifest.rooms().begin(), manifest.rooms().end(), r) == manifest.rooms().end()) {
      throw PreconditionError("room '" + r + "' is not in the manifest");
    }
  }
  return cfg.rooms;
}

std::vector<fs::path> rep_files(const fs::path& dir) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.size() > 8 && name.ends_with(".rep.csv")) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

LowDimRep read_rep(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path.string());
  std::string row;
  std::getline(in, row);
  try {
    return LowDimRep::from_csv_row(row);
  } catch (const Error& e) {
    throw PreconditionError(path.string() + ": " + e.what());
  }
}

void write_rep(const fs::path& path, const LowDimRep& rep) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path.string());
  out << rep.to_csv_row() << '\n';
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

StageReport run_encode(const RunConfig& cfg) {
  cfg.validate();
  const auto manifest = DatasetManifest::read(cfg.manifest);
  if (manifest.empty()) throw PreconditionError("manifest " + cfg.manifest.string() + " has no entries");
  StageReport report{Stage::kEncode, select_rooms(cfg, manifest), {}, 0};
  prepare_out(cfg);

  Failures failures;
  std::atomic<std::size_t> written{0};
  std::vector<RoomEncode> results(report.rooms.size());
  parallel_for(report.rooms.size(), cfg.jobs, [&](std::size_t i) {
    results[i] = encode_room(cfg, manifest, report.rooms[i], failures, written);
  });

  const Layout layout{cfg.out};
  std::ofstream csv(layout.encode_summary());
  if (!csv) throw PreconditionError("cannot write " + layout.encode_summary().string());
  csv.precision(10);
  csv << "room,airs,encoded,failed,t60_mean,t60_std,mean_reflections\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    csv << report.rooms[i] << ',' << r.airs << ',' << r.encoded << ',' << r.airs - r.encoded << ','
        << mean(r.t60) << ',' << stddev(r.t60) << ',' << mean(r.reflections) << '\n';
  }
  report.failures = failures.take();
  report.files_written = written;
  return report;
}

StageReport run_train(const RunConfig& cfg) {
  cfg.validate();
  StageReport report{Stage::kTrain, resolve_rooms(cfg), {}, 0};
  prepare_out(cfg);
  const Layout layout{cfg.out};
  fs::create_directories(cfg.out / "models");

  Failures failures;
  std::atomic<std::size_t> written{0};
  parallel_for(report.rooms.size(), cfg.jobs, [&](std::size_t i) {
    const auto& room = report.rooms[i];
    try {
      const auto files = rep_files(layout.reps(room));
      if (files.empty()) throw PreconditionError("no reps under " + layout.reps(room).string());
      gan::GanConfig g = cfg.gan;
      g.seed = room_seed(cfg.seed, room);
      const fs::path stem = layout.model(room);
      if (!cfg.force && checkpoint_current(stem, g, files)) {
        Log::line("train " + room + ": checkpoint is current, skipped");
        return;
      }
      const auto reps = read_reps(layout.reps(room));
      auto model = gan::build_lowdim_gan(g);
      model.room_label = room;
      gan::train(model, reps, g);
      gan::save_gan(stem, model);
      gan::write_history_csv(suffixed(stem, ".history.csv"), model);
      gan::load_gan(stem);
      written += 4;
      const auto& last = model.history.back();
      std::ostringstream msg;
      msg << "train " << room << ": " << reps.size() << " reps, d_loss " << last.d_loss << ", g_loss "
          << last.g_loss << ", d_accuracy " << last.d_accuracy;
      Log::line(msg.str());
    } catch (const std::exception& e) {
      failures.add(room + ": " + e.what());
    }
  });
  report.failures = failures.take();
  report.files_written = written;
  return report;
}

StageReport run_generate(const RunConfig& cfg) {
  cfg.validate();
  StageReport report{Stage::kGenerate, resolve_rooms(cfg), {}, 0};
  prepare_out(cfg);
  const Layout layout{cfg.out};

  Failures failures;
  std::atomic<std::size_t> written{0};
  std::vector<gan::RepairCounts> repairs(report.rooms.size());
  std::vector<std::size_t> draws(report.rooms.size(), 0), made(report.rooms.size(), 0);
  parallel_for(report.rooms.size(), cfg.jobs, [&](std::size_t r) {
    const auto& room = report.rooms[r];
    std::optional<gan::GanModel> loaded;
    ExcitationBank bank;
    try {
      loaded = gan::load_gan(layout.model(room));
      bank = ExcitationBank::read(layout.bank(room));
    } catch (const std::exception& e) {
      failures.add(room + ": " + e.what());
      return;
    }
    auto& model = *loaded;
    const fs::path dir = layout.generated(room);
    reset_dir(dir);
    const std::uint64_t base = mix_seed(room_seed(cfg.seed, room), 1);
    const auto attempts = static_cast<std::uint64_t>(cfg.max_retries) + 1;
    for (std::size_t i = 0; i < cfg.count; ++i) {
      const std::string name = "gen_" + std::to_string(i);
      bool done = false;
      std::string last_problem = "no draw";
      for (std::uint64_t a = 0; a < attempts && !done; ++a) {
        const std::uint64_t seed = mix_seed(base, i * attempts + a);
        ++draws[r];
        auto g = gan::generate(model, 1, seed, cfg.synthesis.sample_rate);
        repairs[r] += g.repairs;
        const LowDimRep& rep = g.reps.front();
        if (const auto v = rep.violations(cfg.synthesis.sample_rate); !v.empty()) {
          last_problem = v.front();
          continue;
        }
        try {
          SynthesisConfig sc = cfg.synthesis;
          sc.seed = seed;
          const auto air = decode(rep, bank, sc).with_labels(room, name);
          const fs::path wav = dir / (name + ".wav");
          const fs::path csv = dir / (name + ".rep.csv");
          save_air(air, wav);
          write_rep(csv, rep);
          const auto air_back = load_air(wav);
          if (air_back.sample_rate() != sc.sample_rate || air_back.size() != sc.length ||
              !std::equal(air.taps().begin(), air.taps().end(), air_back.taps().begin())) {
            throw Error("WAV read-back mismatch");
          }
          const auto rep_back = read_rep(csv);
          if (!(rep_back == rep) || !rep_back.valid(sc.sample_rate)) throw Error("rep read-back mismatch");
          written += 2;
          ++made[r];
          done = true;
        } catch (const DegenerateInputError& e) {
          last_problem = e.what();
        } catch (const std::exception& e) {
          failures.add(room + "/" + name + ": " + e.what());
          done = true;
        }
      }
      if (!done) {
        failures.add(room + "/" + name + ": no valid sample after " + std::to_string(attempts) +
                     " draws (" + last_problem + ")");
      }
    }
    Log::line("generate " + room + ": " + std::to_string(made[r]) + "/" + std::to_string(cfg.count) +
              " from " + std::to_string(draws[r]) + " draws");
  });

  std::ofstream csv(layout.generate_summary());
  if (!csv) throw PreconditionError("cannot write " + layout.generate_summary().string());
  csv << "room,generated,draws,clamped_scalars,reordered_toas,dropped_reflections,"
         "stabilized_filters,invalid\n";
  for (std::size_t r = 0; r < report.rooms.size(); ++r) {
    const auto& c = repairs[r];
    csv << report.rooms[r] << ',' << made[r] << ',' << draws[r] << ',' << c.clamped_scalars << ','
        << c.reordered_toas << ',' << c.dropped_reflections << ',' << c.stabilized_filters << ','
        << c.invalid << '\n';
  }
  report.failures = failures.take();
  report.files_written = written;
  return report;
}

StageReport run_stats(const RunConfig& cfg) {
  cfg.validate();
  StageReport report{Stage::kStats, resolve_rooms(cfg), {}, 0};
  prepare_out(cfg);
  const Layout layout{cfg.out};
  fs::create_directories(cfg.out / "stats");

  Failures failures;
  std::vector<std::optional<gan::DistributionReport>> results(report.rooms.size());
  parallel_for(report.rooms.size(), cfg.jobs, [&](std::size_t i) {
    const auto& room = report.rooms[i];
    try {
      const auto real = read_reps(layout.reps(room));
      const auto gen = read_reps(layout.generated(room));
      if (real.empty()) throw PreconditionError("no reps under " + layout.reps(room).string());
      if (gen.empty()) throw PreconditionError("no generated reps under " + layout.generated(room).string());
      auto r = gan::evaluate_distribution(real, gen, cfg.synthesis.sample_rate);
      r.write_csv(suffixed(layout.stats(room), ".csv"));
      r.write_json(suffixed(layout.stats(room), ".json"));
      results[i] = std::move(r);
    } catch (const std::exception& e) {
      failures.add(room + ": " + e.what());
    }
  });

  std::ofstream csv(layout.stats_summary());
  if (!csv) throw PreconditionError("cannot write " + layout.stats_summary().string());
  csv.precision(10);
  csv << "room,parameter,real_count,generated_count,ks,real_mean,generated_mean\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i]) continue;
    report.files_written += 2;
    for (const auto& p : results[i]->parameters) {
      csv << report.rooms[i] << ',' << p.name << ',' << results[i]->real_count << ','
          << results[i]->generated_count << ',' << p.ks << ',' << p.real_mean << ','
          << p.generated_mean << '\n';
    }
  }
  report.failures = failures.take();
  return report;
}

std::vector<StageReport> run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  std::vector<StageReport> reports;
  for (Stage s : cfg.stages) {
    switch (s) {
      case Stage::kEncode: reports.push_back(run_encode(cfg)); break;
      case Stage::kTrain: reports.push_back(run_train(cfg)); break;
      case Stage::kGenerate: reports.push_back(run_generate(cfg)); break;
      case Stage::kStats: reports.push_back(run_stats(cfg)); break;
    }
    if (!reports.back().ok()) break;
  }
  return reports;
}

}  // namespace airgan::augment
