#ifndef QMA_FIELD_IO_HPP
#define QMA_FIELD_IO_HPP

#include <string>

#include "qma/grid.hpp"

namespace qma {

/// Field container format: one line of JSON metadata
///   {"version": 1, "dim": d, "shape": [...], "dtype": "f64",
///    "endian": "little", "order": "row-major"}
/// terminated by '\n', followed by the raw little-endian values.
/// Round trips are bit-exact.
void save_field(const ScalarField& f, const std::string& path);
ScalarField load_field(const std::string& path);

/// Writes via a temp file in the same directory plus atomic rename.
void atomic_write_field(const ScalarField& f, const std::string& path);
void atomic_write_text(const std::string& text, const std::string& path);

} // namespace qma

#endif
