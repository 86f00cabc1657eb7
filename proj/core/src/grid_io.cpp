#include "cornex/grid_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "cornex/error.hpp"

namespace cornex {

namespace {

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw ShapeError("truncated grid file");
  return v;
}

}  // namespace

SpectralField as_spectral(const GridFunction& f) {
  SpectralField s(f.grid, std::vector<bool>(f.grid.dims(), false));
  s.values = f.values;
  s.parity = f.parity;
  return s;
}

void write_binary(std::ostream& os, const SpectralField& f) {
  os.write("CXGF", 4);
  put<std::uint32_t>(os, 1);
  put<std::uint32_t>(os, f.grid.dims());
  put<std::uint32_t>(os, f.grid.q());
  for (int k = 0; k < f.grid.dims(); ++k) {
    const Axis& a = f.grid.axis(k);
    put<std::uint32_t>(os, a.nodes);
    put<double>(os, a.half_length);
    put<double>(os, a.spacing());
    put<std::uint8_t>(os, a.centering == Centering::Node ? 0 : 1);
    put<std::uint8_t>(os, f.spectral[k] ? 1 : 0);
  }
  for (Parity p : f.parity) put<std::uint8_t>(os, p == Parity::None ? 0 : p == Parity::Odd ? 1 : 2);
  os.write(reinterpret_cast<const char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
}

SpectralField read_binary(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "CXGF", 4) != 0) throw ShapeError("not a grid file");
  if (get<std::uint32_t>(is) != 1) throw ShapeError("unsupported grid file version");
  int dims = static_cast<int>(get<std::uint32_t>(is));
  int q = static_cast<int>(get<std::uint32_t>(is));
  std::vector<Axis> axes(dims);
  std::vector<bool> spectral(dims);
  for (int k = 0; k < dims; ++k) {
    axes[k].nodes = static_cast<int>(get<std::uint32_t>(is));
    axes[k].half_length = get<double>(is);
    (void)get<double>(is);
    axes[k].centering = get<std::uint8_t>(is) ? Centering::Cell : Centering::Node;
    spectral[k] = get<std::uint8_t>(is) != 0;
  }
  SpectralField f(TensorGrid(axes, q), spectral);
  for (int k = 0; k < q; ++k) {
    auto p = get<std::uint8_t>(is);
    f.parity[k] = p == 0 ? Parity::None : p == 1 ? Parity::Odd : Parity::Even;
  }
  is.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
  if (!is) throw ShapeError("truncated grid payload");
  return f;
}

void write_binary(const std::string& path, const SpectralField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  write_binary(os, f);
}

SpectralField read_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  return read_binary(is);
}

void write_csv(std::ostream& os, const SpectralField& f) {
  const int d = f.grid.dims();
  for (int k = 0; k < d; ++k) os << 'c' << k << ',';
  os << "re,im\n";
  os << std::setprecision(17);
  std::vector<int> idx(d);
  std::vector<double> c(d);
  for (std::size_t i = 0; i < f.grid.size(); ++i) {
    f.grid.unflatten(i, idx.data());
    f.coordinates(idx.data(), c.data());
    for (int k = 0; k < d; ++k) os << c[k] << ',';
    os << f.values[i].real() << ',' << f.values[i].imag() << '\n';
  }
}

}  // namespace cornex
