// SPDX-License-Identifier: Apache-2.0
//
// isacsim: HAPS integrated sensing and communication simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <bit>
#include <charconv>
#include <concepts>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace isacsim::harness
{
    // Shortest text that reads back to the same double.
    inline std::string format_number(double v)
    {
        char buf[64];
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    }

    /// IEEE-754 bit patterns, 16 lowercase hex digits per value, no separators.
    inline std::string genome_hex(std::span<const double> x)
    {
        static constexpr char digits[] = "0123456789abcdef";
        std::string out;
        out.reserve(16 * x.size());
        for (double v : x)
        {
            const auto bits = std::bit_cast<std::uint64_t>(v);
            for (int s = 60; s >= 0; s -= 4)
                out.push_back(digits[(bits >> s) & 0xF]);
        }
        return out;
    }

    inline std::vector<double> genome_from_hex(std::string_view hex)
    {
        if (hex.size() % 16 != 0)
            throw std::invalid_argument("genome hex length must be a multiple of 16");
        std::vector<double> out;
        for (std::size_t i = 0; i < hex.size(); i += 16)
        {
            std::uint64_t bits = 0;
            const auto r = std::from_chars(hex.data() + i, hex.data() + i + 16, bits, 16);
            if (r.ec != std::errc() || r.ptr != hex.data() + i + 16)
                throw std::invalid_argument("malformed genome hex");
            out.push_back(std::bit_cast<double>(bits));
        }
        return out;
    }

    /// In-memory CSV table with a mandatory header. Fields holding a comma, quote
    /// or line break are quoted with doubled quotes.
    class CsvTable
    {
    public:
        explicit CsvTable(std::vector<std::string> header) : header_(std::move(header))
        {
            if (header_.empty())
                throw std::invalid_argument("CSV header must not be empty");
        }

        class Row
        {
        public:
            Row &operator<<(double v) { return add(format_number(v)); }
            template <std::integral T>
            Row &operator<<(T v)
            {
                return add(std::to_string(v));
            }
            Row &operator<<(bool v) { return add(v ? "1" : "0"); }
            Row &operator<<(std::string_view v) { return add(std::string(v)); }
            Row &operator<<(const char *v) { return add(v); }
            Row &operator<<(const std::string &v) { return add(v); }

        private:
            friend class CsvTable;
            Row &add(std::string s)
            {
                fields_.push_back(std::move(s));
                return *this;
            }
            std::vector<std::string> fields_;
        };

        Row &row()
        {
            rows_.emplace_back();
            return rows_.back();
        }

        std::size_t size() const noexcept { return rows_.size(); }

        std::string str() const
        {
            std::string out;
            write_line(out, header_);
            for (const auto &r : rows_)
            {
                if (r.fields_.size() != header_.size())
                    throw std::logic_error("CSV row width does not match the header");
                write_line(out, r.fields_);
            }
            return out;
        }

        void save(const std::filesystem::path &path) const
        {
            std::ofstream f(path, std::ios::binary);
            if (!f)
                throw std::runtime_error("cannot write " + path.string());
            f << str();
            if (!f)
                throw std::runtime_error("write failed for " + path.string());
        }

    private:
        static void write_field(std::string &out, const std::string &v)
        {
            if (v.find_first_of(",\"\r\n") == std::string::npos)
            {
                out += v;
                return;
            }
            out.push_back('"');
            for (char c : v)
            {
                if (c == '"')
                    out.push_back('"');
                out.push_back(c);
            }
            out.push_back('"');
        }

        static void write_line(std::string &out, const std::vector<std::string> &fields)
        {
            for (std::size_t i = 0; i < fields.size(); ++i)
            {
                if (i)
                    out.push_back(',');
                write_field(out, fields[i]);
            }
            out.push_back('\n');
        }

        std::vector<std::string> header_;
        std::vector<Row> rows_;
    };

    /// Reads what CsvTable writes: first row is the header, remaining rows are records.
    inline std::vector<std::vector<std::string>> read_csv(std::string_view text)
    {
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> row;
        std::string field;
        bool quoted = false, any = false;
        for (std::size_t i = 0; i < text.size(); ++i)
        {
            const char c = text[i];
            if (quoted)
            {
                if (c == '"' && i + 1 < text.size() && text[i + 1] == '"')
                    field.push_back(text[++i]);
                else if (c == '"')
                    quoted = false;
                else
                    field.push_back(c);
                continue;
            }
            any = true;
            if (c == '"')
                quoted = true;
            else if (c == ',')
                row.push_back(std::exchange(field, {}));
            else if (c == '\n')
            {
                row.push_back(std::exchange(field, {}));
                rows.push_back(std::exchange(row, {}));
                any = false;
            }
            else if (c != '\r')
                field.push_back(c);
        }
        if (any)
        {
            row.push_back(field);
            rows.push_back(row);
        }
        return rows;
    }
}
