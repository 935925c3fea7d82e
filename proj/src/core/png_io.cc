// Copyright (c) 2026 The spcx Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "png_io.h"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include "error.h"

namespace spcx {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void png_error_handler(png_structp png, png_const_charp msg) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text) *text = msg;
  png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

const char* color_type_name(int color_type) {
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY: return "grayscale";
    case PNG_COLOR_TYPE_RGB: return "RGB";
    case PNG_COLOR_TYPE_PALETTE: return "palette";
    case PNG_COLOR_TYPE_GRAY_ALPHA: return "grayscale+alpha";
    case PNG_COLOR_TYPE_RGB_ALPHA: return "RGBA";
    default: return "unknown";
  }
}

}  // namespace

Image load_png(const std::string& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  require(file != nullptr, ErrorCode::kIo, "cannot open PNG '" + path + "'");

  png_byte sig[8];
  require(std::fread(sig, 1, 8, file.get()) == 8 && png_sig_cmp(sig, 0, 8) == 0,
          ErrorCode::kIo, "'" + path + "' is not a PNG file");

  std::string err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err,
                                           png_error_handler,
                                           png_warning_handler);
  require(png != nullptr, ErrorCode::kIo, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(ErrorCode::kIo, "libpng init failed");
  }

  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0, interlace = 0;
  std::vector<png_byte> pixels;
  volatile int channels = 0;
  volatile bool unsupported = false;
  std::vector<png_bytep> rows;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::kIo, "failed to decode PNG '" + path + "': " + err);
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, &interlace,
               nullptr, nullptr);
  if (bit_depth != 8 ||
      (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB)) {
    unsupported = true;
  } else {
    channels = color_type == PNG_COLOR_TYPE_GRAY ? 1 : 3;
    png_set_interlace_handling(png);
    png_read_update_info(png, info);
    std::size_t row_bytes = static_cast<std::size_t>(width) * channels;
    pixels.resize(row_bytes * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = &pixels[y * row_bytes];
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);

  if (unsupported) {
    fail(ErrorCode::kIo, "unsupported PNG '" + path + "': " +
                             std::to_string(bit_depth) + "-bit " +
                             color_type_name(color_type) +
                             " (need 8-bit grayscale or RGB)");
  }

  std::vector<double> data(pixels.size());
  std::transform(pixels.begin(), pixels.end(), data.begin(),
                 [](png_byte b) { return b / 255.0; });
  return Image(static_cast<int>(height), static_cast<int>(width), channels,
               std::move(data));
}

void save_png(const Image& img, const std::string& path) {
  require(!img.empty(), ErrorCode::kInvalidArgument, "cannot save empty image");
  FilePtr file(std::fopen(path.c_str(), "wb"));
  require(file != nullptr, ErrorCode::kIo,
          "cannot open '" + path + "' for writing");

  const int w = img.width(), h = img.height(), c = img.channels();
  std::vector<png_byte> bytes(img.size());
  auto src = img.data();
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    double v = std::clamp(src[i], 0.0, 1.0);
    bytes[i] = static_cast<png_byte>(std::lround(v * 255.0));
  }

  std::string err;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err,
                                            png_error_handler,
                                            png_warning_handler);
  require(png != nullptr, ErrorCode::kIo, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(ErrorCode::kIo, "libpng init failed");
  }
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) {
    rows[y] = &bytes[static_cast<std::size_t>(y) * w * c];
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::kIo, "failed to encode PNG '" + path + "': " + err);
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, w, h, 8,
               c == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_sRGB(png, info, PNG_sRGB_INTENT_PERCEPTUAL);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);

  require(std::fflush(file.get()) == 0, ErrorCode::kIo,
          "failed to flush '" + path + "'");
}

}  // namespace spcx
