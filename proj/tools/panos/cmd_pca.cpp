#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "commands.hpp"
#include "panos/data/dataset_io.hpp"
#include "panos/io/manifest.hpp"
#include "panos/io/svg.hpp"
#include "panos/metrics/stability.hpp"

namespace panos::cli {

int cmd_pca_report(const CommonArgs& args) {
  auto cfg = io::Config::parse_file(args.config);
  cfg.validate_keys({}, {"pca.group."});

  const auto groups = cfg.with_prefix("pca.group.");
  if (groups.size() < 2)
    throw std::invalid_argument("pca-report needs at least 2 groups (pca.group.<name> keys)");

  std::vector<std::string> names;
  std::vector<std::vector<double>> fractions;
  io::Manifest manifest;
  manifest.command = "pca-report";
  manifest.config_hash = cfg.canonical_hash();
  manifest.inputs.push_back(args.config.string());

  for (const auto& [key, path] : groups) {
    names.push_back(key.substr(std::string("pca.group.").size()));
    manifest.inputs.push_back(path);
    const auto sequences = data::read_dataset(path);
    std::vector<std::array<double, sim::kProprioDim>> rows;
    rows.reserve(sequences.size());
    for (const auto& s : sequences) rows.push_back(s.proprio);
    fractions.push_back(
        metrics::pca_explained_variance(metrics::proprio_matrix(rows)));
  }

  const auto out = ensure_out_dir(args.out);
  const auto csv_path = out / "pca_variance.csv";
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open csv: " + csv_path.string());
  csv << "component";
  for (const auto& n : names) csv << "," << n;
  csv << "\n";
  char buf[64];
  for (int comp = 0; comp < sim::kProprioDim; ++comp) {
    csv << comp + 1;
    for (const auto& f : fractions) {
      std::snprintf(buf, sizeof(buf), ",%.9f", f[static_cast<std::size_t>(comp)]);
      csv << buf;
    }
    csv << "\n";
  }
  csv.close();

  // Chart shows the leading components only; tails are ~0.
  std::vector<std::vector<double>> top(fractions.size());
  for (std::size_t g = 0; g < fractions.size(); ++g)
    top[g].assign(fractions[g].begin(), fractions[g].begin() + 10);
  const auto svg_path = out / "pca_variance.svg";
  io::write_line_chart(svg_path, "PCA explained variance by group",
                       "explained variance fraction", names, top);

  manifest.outputs = {csv_path.string(), svg_path.string()};
  io::write_manifest(manifest, out / "manifest.json");
  return 0;
}

}  // namespace panos::cli
