#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "resolvex/vector.hpp"

namespace resolvex::io {

inline std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Writes a matrix/grid-shaped value as CSV, one row per line, full precision.
inline void write_csv_matrix(std::ostream& os, const Vector& m) {
  const Shape& s = m.shape();
  if (s.kind() != Shape::Kind::matrix && s.kind() != Shape::Kind::grid)
    throw std::invalid_argument("write_csv_matrix: matrix or grid shape required");
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = 0; j < s.cols(); ++j) {
      if (j) os << ',';
      os << format_full(m.at(i, j));
    }
    os << '\n';
  }
}

inline void write_csv_matrix(const std::string& path, const Vector& m) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  write_csv_matrix(f, m);
}

/// Reads a rectangular CSV of numbers into a matrix-shaped value.
inline Vector read_csv_matrix(std::istream& is) {
  std::vector<double> data;
  std::size_t rows = 0, cols = 0;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ls, cell, ',')) {
      data.push_back(std::stod(cell));
      ++c;
    }
    if (cols == 0)
      cols = c;
    else if (c != cols)
      throw std::runtime_error("read_csv_matrix: ragged rows");
    ++rows;
  }
  if (rows == 0) throw std::runtime_error("read_csv_matrix: empty input");
  return Vector(Shape::matrix(rows, cols), std::move(data));
}

inline Vector read_csv_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_csv_matrix(f);
}

/// Writes an image as 8-bit binary PGM; values are clamped to [0,1] and scaled
/// to 0..255.
inline void write_pgm(const std::string& path, const Vector& img) {
  const Shape& s = img.shape();
  if (s.kind() != Shape::Kind::matrix && s.kind() != Shape::Kind::grid)
    throw std::invalid_argument("write_pgm: matrix or grid shape required");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "P5\n" << s.cols() << ' ' << s.rows() << "\n255\n";
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double v = std::clamp(img[i], 0.0, 1.0);
    f.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
  }
}

/// Reads an 8-bit binary PGM into a matrix-shaped value scaled to [0,1].
inline Vector read_pgm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string magic;
  f >> magic;
  if (magic != "P5") throw std::runtime_error("read_pgm: only binary P5 supported");
  auto next_token = [&f]() {
    std::string tok;
    while (f >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(f, rest);
        continue;
      }
      return tok;
    }
    throw std::runtime_error("read_pgm: truncated header");
  };
  const std::size_t w = std::stoul(next_token());
  const std::size_t h = std::stoul(next_token());
  const std::size_t maxval = std::stoul(next_token());
  if (maxval == 0 || maxval > 255) throw std::runtime_error("read_pgm: unsupported maxval");
  f.get();  // single whitespace after header
  Vector img(Shape::matrix(h, w));
  for (std::size_t i = 0; i < img.size(); ++i) {
    const int c = f.get();
    if (c == EOF) throw std::runtime_error("read_pgm: truncated data");
    img[i] = static_cast<double>(c) / static_cast<double>(maxval);
  }
  return img;
}

}  // namespace resolvex::io
