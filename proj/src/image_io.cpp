#include "dnsnmf/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>

namespace dnsnmf {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in, const std::string& path) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF) throw DataFormatError(path + ": truncated PGM header");
  std::string token;
  while (c != EOF && !std::isspace(c)) {
    token.push_back(static_cast<char>(c));
    c = in.get();
  }
  return token;
}

index_t parse_header_int(const std::string& token, const std::string& path, const char* what) {
  index_t value = 0;
  for (char ch : token) {
    if (ch < '0' || ch > '9') {
      throw DataFormatError(path + ": bad PGM " + what + " '" + token + "'");
    }
    value = value * 10 + (ch - '0');
    if (value > (index_t{1} << 30)) throw DataFormatError(path + ": PGM " + what + " too large");
  }
  return value;
}

}  // namespace

GrayImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataFormatError(path + ": cannot open");

  if (next_token(in, path) != "P5") throw DataFormatError(path + ": not a binary PGM (P5)");
  const index_t width = parse_header_int(next_token(in, path), path, "width");
  const index_t height = parse_header_int(next_token(in, path), path, "height");
  const index_t maxval = parse_header_int(next_token(in, path), path, "maxval");
  if (width < 1 || height < 1) throw DataFormatError(path + ": empty PGM");
  if (maxval < 1 || maxval > 255) {
    throw DataFormatError(path + ": unsupported PGM maxval " + std::to_string(maxval));
  }
  // A single whitespace byte separates the header from the raster; next_token
  // already consumed it.

  GrayImage img;
  img.height = height;
  img.width = width;
  img.maxval = static_cast<int>(maxval);
  img.pixels.resize(static_cast<std::size_t>(height * width));
  in.read(reinterpret_cast<char*>(img.pixels.data()),
          static_cast<std::streamsize>(img.pixels.size()));
  if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
    throw DataFormatError(path + ": truncated PGM raster");
  }
  return img;
}

void write_pgm(const std::string& path, const GrayImage& img) {
  if (img.height < 1 || img.width < 1) throw ParameterError("write_pgm: empty image");
  if (img.maxval < 1 || img.maxval > 255) throw ParameterError("write_pgm: maxval out of range");
  if (img.pixels.size() != static_cast<std::size_t>(img.height * img.width)) {
    throw DimensionError("write_pgm: pixel count does not match dimensions");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataFormatError(path + ": cannot open for writing");
  out << "P5\n" << img.width << " " << img.height << "\n" << img.maxval << "\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw DataFormatError(path + ": write failed");
}

ImageMatrix load_pgm_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw DataFormatError(dir + ": not a directory");

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.push_back(entry.path().string());
    }
  }
  if (files.empty()) throw DataFormatError(dir + ": no .pgm files");
  std::sort(files.begin(), files.end());

  ImageMatrix out;
  const auto n = static_cast<index_t>(files.size());
  for (index_t s = 0; s < n; ++s) {
    const GrayImage img = read_pgm(files[static_cast<std::size_t>(s)]);
    if (s == 0) {
      out.height = img.height;
      out.width = img.width;
      out.x = DenseMatrix(img.height * img.width, n);
    } else if (img.height != out.height || img.width != out.width) {
      throw DataFormatError(files[static_cast<std::size_t>(s)] + ": image size " +
                            std::to_string(img.width) + "x" + std::to_string(img.height) +
                            " differs from first image");
    }
    const double scale = 1.0 / static_cast<double>(img.maxval);
    for (index_t j = 0; j < img.width; ++j) {
      for (index_t i = 0; i < img.height; ++i) {
        out.x(j * img.height + i, s) =
            scale * static_cast<double>(img.pixels[static_cast<std::size_t>(i * img.width + j)]);
      }
    }
  }
  return out;
}

}  // namespace dnsnmf
