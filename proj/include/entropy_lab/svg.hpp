// Copyright 2026 The Entropy Lab Authors.
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

#ifndef ENTROPY_LAB_SVG_HPP_
#define ENTROPY_LAB_SVG_HPP_

// Minimal SVG output for line and bar charts.

#include <string>
#include <utility>
#include <vector>

namespace entropy_lab::svg {

std::string escape(const std::string& text);

// Formats a coordinate with two decimals.
std::string coord(double v);

// "Nice" tick positions covering [lo, hi], about `count` of them.
std::vector<double> ticks(double lo, double hi, int count = 5);

class Document {
 public:
  Document(int width, int height);

  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& extra = "");
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0);
  void text(double x, double y, const std::string& content, int size = 12,
            const std::string& anchor = "start", const std::string& extra = "");
  // `attributes` is appended verbatim inside the element.
  void polyline(const std::vector<std::pair<double, double>>& points,
                const std::string& stroke, double width, double opacity,
                const std::string& attributes = "");
  void raw(const std::string& element);

  std::string str() const;

 private:
  int width_;
  int height_;
  std::string body_;
};

}  // namespace entropy_lab::svg

#endif  // ENTROPY_LAB_SVG_HPP_
