#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

#include "dropsvm/model.hpp"
#include "dropsvm/multiclass.hpp"
#include "dropsvm/noise.hpp"

namespace dropsvm {

/// Text model file:
///   dropsvm-model 1
///   dim <D>
///   trainer <name>
///   noise <kind> <level>
///   c <c>
///   ell <ell>
///   classes <K> <label...>      (one-vs-all only)
///   model <k>                   (one block per class; binary files have one)
///   <index> <value>             (D + 1 lines, offset at index D)
struct ModelFile {
  std::string trainer;
  NoiseSpec noise;
  double c = 1.0;
  double ell = 1.0;
  std::variant<ModelParams, OvaModel> model;

  std::size_t dim() const;
};

void write_model(std::ostream& out, const ModelFile& file);
ModelFile read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const ModelFile& file);
/// Throws std::runtime_error when the file cannot be opened.
ModelFile load_model(const std::filesystem::path& path);

}  // namespace dropsvm
