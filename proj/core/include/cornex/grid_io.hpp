#pragma once

#include <iosfwd>
#include <string>

#include "cornex/grid.hpp"

namespace cornex {

/// Binary layout (little endian): "CXGF", u32 version, u32 dims, u32 q, then per
/// axis {u32 nodes, f64 half_length, f64 spacing, u8 centering, u8 spectral},
/// then q parity bytes (0 none, 1 odd, 2 even), then row-major complex<f64> values.
void write_binary(std::ostream& os, const SpectralField& f);
SpectralField read_binary(std::istream& is);
void write_binary(const std::string& path, const SpectralField& f);
SpectralField read_binary(const std::string& path);

SpectralField as_spectral(const GridFunction& f);

/// CSV with columns c0..c{d-1},re,im; coordinates are frequencies on spectral axes.
void write_csv(std::ostream& os, const SpectralField& f);

}  // namespace cornex
