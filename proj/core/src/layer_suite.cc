// Copyright 2026 The dwconv Authors. All Rights Reserved.
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

#include "dwconv/layer_suite.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dwconv/error.h"

namespace dwconv {
namespace {

struct SuiteEntry {
  const char* net;
  int c;
  int hi;
  int stride;
};

// 224x224 input. Consecutive blocks sharing (C, Hi, s) appear once.
constexpr SuiteEntry kMobileNet[] = {
    {"v1", 32, 112, 1},  {"v1", 64, 112, 2},  {"v1", 128, 56, 1},
    {"v1", 128, 56, 2},  {"v1", 256, 28, 1},  {"v1", 256, 28, 2},
    {"v1", 512, 14, 1},  {"v1", 512, 14, 2},  {"v1", 1024, 7, 1},
    {"v2", 32, 112, 1},  {"v2", 96, 112, 2},  {"v2", 144, 56, 1},
    {"v2", 144, 56, 2},  {"v2", 192, 28, 1},  {"v2", 192, 28, 2},
    {"v2", 384, 14, 1},  {"v2", 576, 14, 1},  {"v2", 576, 14, 2},
    {"v2", 960, 7, 1},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

int parse_int(const std::string& field, int line, const char* what) {
  int v = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw ParseError(line, std::string("bad integer for ") + what + ": '" +
                               field + "'");
  }
  return v;
}

}  // namespace

std::vector<LayerConfig> mobilenet_layer_suite() {
  std::vector<LayerConfig> layers;
  for (const auto& e : kMobileNet) {
    const std::string net = e.net;
    const std::string name = net + "_c" + std::to_string(e.c) + "_" +
                             std::to_string(e.hi) + "_s" +
                             std::to_string(e.stride);
    layers.push_back(LayerConfig{
        name, ConvGeometry::make(1, e.c, e.hi, e.hi, e.stride, 1),
        "mobilenet-" + net});
  }
  return layers;
}

std::vector<LayerConfig> parse_layer_config(std::istream& in,
                                            const std::string& source) {
  static constexpr const char* kFields[] = {"N",  "C",  "Hi", "Wi",
                                            "Hf", "Wf", "s",  "pt",
                                            "pb", "pl", "pr"};
  std::vector<LayerConfig> layers;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text.front() == '#') continue;

    std::vector<std::string> fields;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!text.empty() && text.back() == ',') fields.emplace_back();
    if (fields.size() != 12) {
      throw ParseError(line, "expected 12 comma-separated fields, got " +
                                 std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(line, "empty layer name");

    int v[11];
    for (int i = 0; i < 11; ++i) v[i] = parse_int(fields[i + 1], line, kFields[i]);
    try {
      layers.push_back(LayerConfig{
          fields[0],
          ConvGeometry(ConvParams{v[0], v[1], v[2], v[3], v[4], v[5], v[6],
                                  v[7], v[8], v[9], v[10]}),
          source});
    } catch (const ShapeError& e) {
      throw ParseError(line, e.what());
    }
  }
  return layers;
}

std::vector<LayerConfig> load_layer_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return parse_layer_config(in, path.filename().string());
}

std::string format_layer_config(const std::vector<LayerConfig>& layers) {
  std::ostringstream os;
  os << "# name,N,C,Hi,Wi,Hf,Wf,s,pt,pb,pl,pr\n";
  for (const auto& l : layers) {
    const auto& p = l.geometry.params();
    os << l.name << ',' << p.n << ',' << p.c << ',' << p.hi << ',' << p.wi
       << ',' << p.hf << ',' << p.wf << ',' << p.stride << ',' << p.pt << ','
       << p.pb << ',' << p.pl << ',' << p.pr << '\n';
  }
  return os.str();
}

}  // namespace dwconv
