#pragma once

#include <filesystem>
#include <fstream>

#include "hmt/harness/config.hpp"
#include "hmt/harness/csv.hpp"
#include "hmt/harness/experiments.hpp"
#include "hmt/harness/parallel.hpp"
#include "hmt/harness/plot.hpp"

namespace hmt {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path.string());
  out << text;
}

/// Writes <experiment>.csv, <experiment>.json and, where it applies, an SVG
/// plot into dir.
inline void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  const std::string csv = result.csv();
  write_text(dir / (result.experiment + ".csv"), csv);
  write_text(dir / (result.experiment + ".json"), result.summary.dump(2) + "\n");
  try {
    if (result.experiment == "cm-histogram") {
      write_text(dir / (result.experiment + ".svg"), emit_plot(csv, PlotKind::Histogram));
    } else if (result.experiment != "timing") {
      write_text(dir / (result.experiment + ".svg"), emit_plot(csv, PlotKind::Distance));
    }
  } catch (const SchemaMismatch&) {
    // every row failed; the CSV still records why
  }
}

}  // namespace hmt
