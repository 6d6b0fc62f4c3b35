#include "qma/field_io.hpp"

#include "json.hpp"

#include <bit>
#include <unistd.h>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "qma/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "field container assumes a little-endian host");

namespace qma {

namespace {
using nlohmann::json;
}

void save_field(const ScalarField& f, const std::string& path) {
  json meta = {{"version", 1},
               {"dim", f.grid().dim()},
               {"shape", f.grid().shape()},
               {"dtype", "f64"},
               {"endian", "little"},
               {"order", "row-major"}};
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("save_field: cannot open " + path);
  os << meta.dump() << '\n';
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!os) throw Error("save_field: write failed for " + path);
}

ScalarField load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("load_field: cannot open " + path);
  std::string header;
  if (!std::getline(is, header)) throw ParseError("load_field: missing header line");
  json meta;
  try {
    meta = json::parse(header);
  } catch (const json::exception& e) {
    throw ParseError(std::string("load_field: bad header: ") + e.what());
  }
  if (meta.value("dtype", "") != "f64" || meta.value("endian", "") != "little" ||
      meta.value("order", "") != "row-major")
    throw ParseError("load_field: unsupported encoding");
  const auto shape = meta.at("shape").get<std::vector<int>>();
  if (meta.value("dim", -1) != static_cast<int>(shape.size()))
    throw ParseError("load_field: dim does not match shape");
  PeriodicGrid grid(shape);
  std::vector<double> values(grid.size());
  is.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (static_cast<std::size_t>(is.gcount()) != values.size() * sizeof(double))
    throw ParseError("load_field: truncated payload");
  return {std::move(grid), std::move(values)};
}

namespace {

std::string temp_sibling(const std::string& path) {
  return path + ".tmp." + std::to_string(::getpid());
}

} // namespace

void atomic_write_field(const ScalarField& f, const std::string& path) {
  const std::string tmp = temp_sibling(path);
  save_field(f, tmp);
  std::filesystem::rename(tmp, path);
}

void atomic_write_text(const std::string& text, const std::string& path) {
  const std::string tmp = temp_sibling(path);
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("atomic_write_text: cannot open " + tmp);
    os << text;
  }
  std::filesystem::rename(tmp, path);
}

} // namespace qma
