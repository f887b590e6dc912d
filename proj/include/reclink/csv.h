// Copyright 2026 The reclink Authors.
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

#ifndef RECLINK_CSV_H_
#define RECLINK_CSV_H_

#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace reclink {

using CsvRow = std::vector<std::string>;

// Reads delimited text with RFC 4180 quoting: fields may be enclosed in
// double quotes, a doubled quote inside an enclosure is a literal quote, and
// quoted fields may span lines. CR LF and LF line endings are accepted. A
// final empty line is not a row.
std::vector<CsvRow> ReadCsv(std::istream &in, char delimiter = ',');

// Writes one row, quoting only the fields that need it.
void WriteCsvRow(std::ostream &out, const CsvRow &row, char delimiter = ',');

}  // namespace reclink

#endif  // RECLINK_CSV_H_
