#include "bartnik/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bartnik::grid {

namespace {
constexpr char kMagic[4] = {'B', 'F', 'L', 'D'};
}

void save_field(const Field& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("save_field: cannot open " + path);
  os.write(kMagic, 4);
  std::uint32_t dims[4] = {static_cast<std::uint32_t>(f.g->nr()),
                           static_cast<std::uint32_t>(f.g->ntheta()),
                           static_cast<std::uint32_t>(f.g->nphi()),
                           static_cast<std::uint32_t>(f.ncomp)};
  os.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  double rmax = f.g->rmax();
  os.write(reinterpret_cast<const char*>(&rmax), sizeof(rmax));
  os.write(reinterpret_cast<const char*>(f.data.data()),
           static_cast<std::streamsize>(f.data.size() * sizeof(double)));
}

Field load_field(const Grid& g, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_field: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error("load_field: bad magic");
  std::uint32_t dims[4];
  is.read(reinterpret_cast<char*>(dims), sizeof(dims));
  double rmax = 0;
  is.read(reinterpret_cast<char*>(&rmax), sizeof(rmax));
  if (static_cast<int>(dims[0]) != g.nr() || static_cast<int>(dims[1]) != g.ntheta() ||
      static_cast<int>(dims[2]) != g.nphi() || std::abs(rmax - g.rmax()) > 1e-12) {
    throw std::runtime_error("load_field: grid mismatch");
  }
  Field f(g, static_cast<int>(dims[3]));
  is.read(reinterpret_cast<char*>(f.data.data()),
          static_cast<std::streamsize>(f.data.size() * sizeof(double)));
  if (!is) throw std::runtime_error("load_field: truncated file");
  return f;
}

void save_field_csv(const Field& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("save_field_csv: cannot open " + path);
  os << "ir,itheta,iphi,x,y,z";
  for (int c = 0; c < f.ncomp; ++c) os << ",c" << c;
  os << "\n";
  os.precision(17);
  const Grid& g = *f.g;
  for (int ir = 0; ir < g.nr(); ++ir) {
    for (int it = 0; it < g.ntheta(); ++it) {
      for (int ip = 0; ip < g.nphi(); ++ip) {
        std::size_t n = g.node(ir, it, ip);
        auto x = g.x(n);
        os << ir << "," << it << "," << ip << "," << x[0] << "," << x[1] << "," << x[2];
        for (int c = 0; c < f.ncomp; ++c) os << "," << f.at(n, c);
        os << "\n";
      }
    }
  }
}

}  // namespace bartnik::grid
