#include "dropsvm/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dropsvm/errors.hpp"
#include "dropsvm/svmlight.hpp"

namespace dropsvm {

namespace {

constexpr const char* kMagic = "dropsvm-model";

void write_coefficients(std::ostream& out, const ModelParams& m) {
  const auto c = m.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) out << i << ' ' << format_double(c[i]) << '\n';
}

[[noreturn]] void bad(const std::string& what) {
  throw std::runtime_error("malformed model file: " + what);
}

std::istringstream next_line(std::istream& in, const std::string& key) {
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) {
      std::istringstream ss(line);
      std::string k;
      ss >> k;
      if (k != key) bad("expected '" + key + "', got '" + k + "'");
      return ss;
    }
  bad("missing '" + key + "'");
}

ModelParams read_coefficients(std::istream& in, std::size_t dim) {
  std::vector<double> coef(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) {
    std::size_t idx = 0;
    std::string value;
    if (!(in >> idx >> value) || idx != i) bad("expected coefficient " + std::to_string(i));
    try {
      std::size_t used = 0;
      coef[i] = std::stod(value, &used);
      if (used != value.size()) bad("bad coefficient '" + value + "'");
    } catch (const std::logic_error&) {
      bad("bad coefficient '" + value + "'");
    }
  }
  in >> std::ws;
  return ModelParams(dim, std::move(coef));
}

}  // namespace

std::size_t ModelFile::dim() const {
  if (const auto* m = std::get_if<ModelParams>(&model)) return m->dim();
  const auto& ova = std::get<OvaModel>(model);
  return ova.models.empty() ? 0 : ova.models.front().dim();
}

void write_model(std::ostream& out, const ModelFile& file) {
  out << kMagic << " 1\n";
  out << "dim " << file.dim() << '\n';
  out << "trainer " << file.trainer << '\n';
  out << "noise " << file.noise.name() << ' ' << format_double(file.noise.level()) << '\n';
  out << "c " << format_double(file.c) << '\n';
  out << "ell " << format_double(file.ell) << '\n';
  if (const auto* m = std::get_if<ModelParams>(&file.model)) {
    out << "model 0\n";
    write_coefficients(out, *m);
    return;
  }
  const auto& ova = std::get<OvaModel>(file.model);
  out << "classes " << ova.classes.size();
  for (int k : ova.classes) out << ' ' << k;
  out << '\n';
  for (std::size_t k = 0; k < ova.models.size(); ++k) {
    out << "model " << k << '\n';
    write_coefficients(out, ova.models[k]);
  }
}

ModelFile read_model(std::istream& in) {
  ModelFile file;
  int version = 0;
  if (!(next_line(in, kMagic) >> version) || version != 1) bad("unsupported version");
  std::size_t dim = 0;
  if (!(next_line(in, "dim") >> dim)) bad("dim");
  if (!(next_line(in, "trainer") >> file.trainer)) bad("trainer");
  std::string kind;
  double level = 0.0;
  if (!(next_line(in, "noise") >> kind >> level)) bad("noise");
  file.noise = NoiseSpec::from_name(kind, level);
  if (!(next_line(in, "c") >> file.c)) bad("c");
  if (!(next_line(in, "ell") >> file.ell)) bad("ell");

  std::string key;
  in >> key;
  if (key == "model") {
    std::size_t k = 0;
    if (!(in >> k) || k != 0) bad("model index");
    file.model = read_coefficients(in, dim);
    return file;
  }
  if (key != "classes") bad("expected 'model' or 'classes'");
  std::size_t count = 0;
  if (!(in >> count) || count < 2) bad("class count");
  OvaModel ova;
  ova.classes.resize(count);
  for (auto& k : ova.classes)
    if (!(in >> k)) bad("class label");
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t idx = 0;
    if (!(in >> key >> idx) || key != "model" || idx != k) bad("model block " + std::to_string(k));
    ova.models.push_back(read_coefficients(in, dim));
  }
  file.model = std::move(ova);
  return file;
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_model(out, file);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file " + path.string());
  return read_model(in);
}

}  // namespace dropsvm
