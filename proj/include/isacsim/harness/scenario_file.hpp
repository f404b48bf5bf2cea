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

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "../scenarios/config.hpp"

namespace isacsim::harness
{
    /// Scenario file problem; the message carries the origin and, when known, the line.
    class ParseError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class System
    {
        a,
        b,
    };

    inline std::string_view to_string(System s) { return s == System::a ? "A" : "B"; }

    // Axes of the sweeps; optional in files, the values below otherwise.
    struct SweepGrid
    {
        std::vector<double> altitudes{20e3, 30e3, 40e3, 50e3};
        std::vector<double> gamma_fractions{0.0, 0.03, 0.06, 0.09, 0.12}; // of p_max * N
        std::vector<DecoderKind> decoders{DecoderKind::single_antenna, DecoderKind::zf, DecoderKind::mmse};
        std::vector<std::size_t> user_counts{1, 2, 3, 4};
        std::vector<double> mus{0.0, 0.25, 0.5, 0.75, 1.0};
    };

    struct ScenarioConfig
    {
        System system = System::b;
        std::string preset; // empty when the file spells out every field
        scenarios::SystemAScenario a;
        scenarios::SystemBScenario b;
        SweepGrid grid;
    };

    inline std::vector<std::string> preset_names() { return {"system_a.default", "system_b.default"}; }

    inline std::optional<ScenarioConfig> preset(std::string_view name)
    {
        ScenarioConfig c;
        c.preset = std::string(name);
        if (name == "system_a.default")
            c.system = System::a;
        else if (name == "system_b.default")
            c.system = System::b;
        else
            return std::nullopt;
        return c;
    }

    namespace parse
    {
        struct Entry
        {
            std::string key; // dotted path
            YAML::Node node;
            int line = 0;    // 1-based
        };

        struct Context
        {
            std::string origin;

            [[noreturn]] void fail(const Entry &e, const std::string &what) const
            {
                throw ParseError(origin + ":" + std::to_string(e.line) + ": " + e.key + ": " + what);
            }
            [[noreturn]] void fail(const std::string &what) const { throw ParseError(origin + ": " + what); }
        };

        inline void flatten(const YAML::Node &n, const std::string &prefix, std::vector<Entry> &out, const Context &ctx)
        {
            for (const auto &kv : n)
            {
                const std::string key = prefix.empty() ? kv.first.as<std::string>() : prefix + "." + kv.first.as<std::string>();
                if (kv.second.IsMap())
                    flatten(kv.second, key, out, ctx);
                else
                    out.push_back({key, kv.second, kv.first.Mark().line + 1});
            }
        }

        inline double number(const Context &ctx, const Entry &e, const YAML::Node &n)
        {
            if (!n.IsScalar())
                ctx.fail(e, "expected a number");
            double v = 0.0;
            try
            {
                v = n.as<double>();
            }
            catch (const YAML::Exception &)
            {
                ctx.fail(e, "malformed number '" + n.Scalar() + "'");
            }
            if (!std::isfinite(v))
                ctx.fail(e, "value must be finite");
            return v;
        }

        inline double number(const Context &ctx, const Entry &e) { return number(ctx, e, e.node); }

        inline std::size_t count(const Context &ctx, const Entry &e, const YAML::Node &n, std::size_t min)
        {
            const double v = number(ctx, e, n);
            if (v != std::floor(v) || v < static_cast<double>(min) || v > 1e9)
                ctx.fail(e, "out of range: expected an integer >= " + std::to_string(min));
            return static_cast<std::size_t>(v);
        }

        inline std::string text(const Context &ctx, const Entry &e)
        {
            if (!e.node.IsScalar())
                ctx.fail(e, "expected a scalar");
            return e.node.Scalar();
        }

        inline const YAML::Node &sequence(const Context &ctx, const Entry &e)
        {
            if (!e.node.IsSequence() || e.node.size() == 0)
                ctx.fail(e, "expected a non-empty list");
            return e.node;
        }

        using Check = std::function<bool(double)>;

        inline bool any(double) { return true; }
        inline bool positive(double v) { return v > 0.0; }
        inline bool non_negative(double v) { return v >= 0.0; }

        struct Field
        {
            std::string key;
            std::string slot;  // fields sharing a slot are alternative spellings of one value
            bool required = true;
            std::function<void(ScenarioConfig &, const Context &, const Entry &)> set;
        };

        inline Field real(std::string key, std::function<double &(ScenarioConfig &)> ref, Check check,
                          std::string rule, std::function<double(double)> convert = {}, std::string slot = {})
        {
            Field f;
            f.slot = slot.empty() ? key : slot;
            f.key = std::move(key);
            f.set = [ref, check, rule, convert](ScenarioConfig &c, const Context &ctx, const Entry &e) {
                double v = number(ctx, e);
                if (convert)
                    v = convert(v);
                if (!check(v))
                    ctx.fail(e, "out of range: " + rule);
                ref(c) = v;
            };
            return f;
        }

        inline Field integer(std::string key, std::function<std::size_t &(ScenarioConfig &)> ref, std::size_t min)
        {
            Field f;
            f.key = f.slot = std::move(key);
            f.set = [ref, min](ScenarioConfig &c, const Context &ctx, const Entry &e) { ref(c) = count(ctx, e, e.node, min); };
            return f;
        }

        inline Field custom(std::string key, std::function<void(ScenarioConfig &, const Context &, const Entry &)> set,
                            bool required = true)
        {
            Field f;
            f.key = f.slot = std::move(key);
            f.required = required;
            f.set = std::move(set);
            return f;
        }

        template <typename S>
        void position_fields(std::vector<Field> &out, const std::string &name, S ScenarioConfig::*sys,
                             Position S::*pos)
        {
            out.push_back(real(name + ".x", [=](ScenarioConfig &c) -> double & { return (c.*sys.*pos).x; }, any, ""));
            out.push_back(real(name + ".y", [=](ScenarioConfig &c) -> double & { return (c.*sys.*pos).y; }, any, ""));
            out.push_back(real(name + ".z", [=](ScenarioConfig &c) -> double & { return (c.*sys.*pos).z; }, positive,
                               "altitude must be positive"));
        }

        template <typename S>
        void array_fields(std::vector<Field> &out, const std::string &name, S ScenarioConfig::*sys,
                          ArrayGeometry S::*arr)
        {
            out.push_back(integer(name + ".rows", [=](ScenarioConfig &c) -> std::size_t & { return (c.*sys.*arr).rows; }, 1));
            out.push_back(integer(name + ".cols", [=](ScenarioConfig &c) -> std::size_t & { return (c.*sys.*arr).cols; }, 1));
            out.push_back(real(name + ".spacing", [=](ScenarioConfig &c) -> double & { return (c.*sys.*arr).spacing; },
                               positive, "spacing must be positive"));
        }

        template <typename S>
        void link_fields(std::vector<Field> &out, const std::string &name, S ScenarioConfig::*sys, LinkBudget S::*link)
        {
            out.push_back(real(name + ".carrier_freq",
                               [=](ScenarioConfig &c) -> double & { return (c.*sys.*link).carrier_freq; }, positive,
                               "frequency must be positive"));
            out.push_back(real(name + ".noise_power",
                               [=](ScenarioConfig &c) -> double & { return (c.*sys.*link).noise_power; }, positive,
                               "noise power must be positive"));
            out.push_back(real(name + ".noise_power_dbm",
                               [=](ScenarioConfig &c) -> double & { return (c.*sys.*link).noise_power; }, positive,
                               "noise power must be positive", dbm_to_watts, name + ".noise_power"));
            out.push_back(real(name + ".bandwidth",
                               [=](ScenarioConfig &c) -> double & { return (c.*sys.*link).bandwidth; }, positive,
                               "bandwidth must be positive"));
        }

        inline std::vector<scenarios::GroundPlacement> placements(const Context &ctx, const Entry &e, bool with_rcs)
        {
            std::vector<scenarios::GroundPlacement> out;
            for (const auto &item : sequence(ctx, e))
            {
                const std::size_t n = item.IsSequence() ? item.size() : 0;
                if (n != 2 && !(with_rcs && n == 3))
                    ctx.fail(e, with_rcs ? "each entry must be [ground_range, azimuth_deg] or [ground_range, azimuth_deg, rcs]"
                                         : "each entry must be [ground_range, azimuth_deg]");
                scenarios::GroundPlacement g;
                g.ground_range = number(ctx, e, item[0]);
                g.azimuth_deg = number(ctx, e, item[1]);
                if (n == 3)
                    g.rcs = number(ctx, e, item[2]);
                if (g.ground_range < 0.0 || g.rcs <= 0.0)
                    ctx.fail(e, "out of range: ground range must be non-negative and rcs positive");
                out.push_back(g);
            }
            return out;
        }

        template <typename S>
        void population_fields(std::vector<Field> &out, S ScenarioConfig::*sys, std::size_t min_users)
        {
            out.push_back(integer("users", [=](ScenarioConfig &c) -> std::size_t & { return (c.*sys).users; }, min_users));
            out.push_back(integer("targets", [=](ScenarioConfig &c) -> std::size_t & { return (c.*sys).targets; }, 1));
            out.push_back(integer("user_antennas",
                                  [=](ScenarioConfig &c) -> std::size_t & { return (c.*sys).user_antennas; }, 1));
            out.push_back(real("user_radius", [=](ScenarioConfig &c) -> double & { return (c.*sys).user_radius; },
                               non_negative, "radius must be non-negative"));
            out.push_back(real("target_radius", [=](ScenarioConfig &c) -> double & { return (c.*sys).target_radius; },
                               non_negative, "radius must be non-negative"));
            out.push_back(real("target_rcs", [=](ScenarioConfig &c) -> double & { return (c.*sys).target_rcs; },
                               positive, "rcs must be positive"));
            out.push_back(real("k_factor", [=](ScenarioConfig &c) -> double & { return (c.*sys).k_factor; },
                               non_negative, "K-factor must be non-negative"));
            out.push_back(custom("power_mode", [=](ScenarioConfig &c, const Context &ctx, const Entry &e) {
                const auto m = scenarios::parse_power_mode(text(ctx, e));
                if (!m)
                    ctx.fail(e, "expected 'repair' or 'normalize'");
                (c.*sys).power_mode = *m;
            }));
            out.push_back(custom(
                "user_placements",
                [=](ScenarioConfig &c, const Context &ctx, const Entry &e) { (c.*sys).user_placements = placements(ctx, e, false); },
                false));
            out.push_back(custom(
                "target_placements",
                [=](ScenarioConfig &c, const Context &ctx, const Entry &e) { (c.*sys).target_placements = placements(ctx, e, true); },
                false));
        }

        inline std::vector<double> reals(const Context &ctx, const Entry &e, Check check, const std::string &rule)
        {
            std::vector<double> out;
            for (const auto &item : sequence(ctx, e))
            {
                const double v = number(ctx, e, item);
                if (!check(v))
                    ctx.fail(e, "out of range: " + rule);
                out.push_back(v);
            }
            return out;
        }

        inline std::vector<Field> fields(System s)
        {
            using C = ScenarioConfig;
            using scenarios::SystemAScenario;
            using scenarios::SystemBScenario;
            std::vector<Field> out;
            if (s == System::b)
            {
                position_fields(out, "haps", &C::b, &SystemBScenario::haps);
                array_fields(out, "array", &C::b, &SystemBScenario::array);
                population_fields(out, &C::b, 0);
                out.push_back(real("p_max", [](C &c) -> double & { return c.b.p_max; }, positive, "power must be positive"));
                out.push_back(real("p_max_dbm", [](C &c) -> double & { return c.b.p_max; }, positive,
                                   "power must be positive", dbm_to_watts, "p_max"));
                out.push_back(real("sinr_floor", [](C &c) -> double & { return c.b.sinr_floor; }, non_negative,
                                   "SINR floor must be non-negative"));
                out.push_back(real("sinr_floor_db", [](C &c) -> double & { return c.b.sinr_floor; }, non_negative,
                                   "SINR floor must be non-negative", db_to_linear, "sinr_floor"));
                link_fields(out, "link", &C::b, &SystemBScenario::link);
                out.push_back(custom(
                    "sweep.altitudes",
                    [](C &c, const Context &ctx, const Entry &e) {
                        c.grid.altitudes = reals(ctx, e, positive, "altitudes must be positive");
                    },
                    false));
                out.push_back(custom(
                    "sweep.gamma_fractions",
                    [](C &c, const Context &ctx, const Entry &e) {
                        c.grid.gamma_fractions = reals(ctx, e, non_negative, "thresholds must be non-negative");
                    },
                    false));
                out.push_back(custom(
                    "sweep.decoders",
                    [](C &c, const Context &ctx, const Entry &e) {
                        c.grid.decoders.clear();
                        for (const auto &item : sequence(ctx, e))
                        {
                            const auto d = item.IsScalar() ? parse_decoder(item.Scalar()) : std::nullopt;
                            if (!d)
                                ctx.fail(e, "expected decoders among single, zf, mmse, mrc");
                            c.grid.decoders.push_back(*d);
                        }
                    },
                    false));
            }
            else
            {
                position_fields(out, "haps", &C::a, &SystemAScenario::haps);
                position_fields(out, "uav", &C::a, &SystemAScenario::uav);
                array_fields(out, "haps_array", &C::a, &SystemAScenario::haps_array);
                array_fields(out, "uav_array", &C::a, &SystemAScenario::uav_array);
                population_fields(out, &C::a, 1);
                link_fields(out, "access", &C::a, &SystemAScenario::access);
                out.push_back(real("backhaul_freq", [](C &c) -> double & { return c.a.backhaul_freq; }, positive,
                                   "frequency must be positive"));
                out.push_back(real("uav_power", [](C &c) -> double & { return c.a.uav_power; }, positive,
                                   "power must be positive"));
                out.push_back(real("uav_power_dbm", [](C &c) -> double & { return c.a.uav_power; }, positive,
                                   "power must be positive", dbm_to_watts, "uav_power"));
                out.push_back(real("mu", [](C &c) -> double & { return c.a.mu; },
                                   [](double v) { return v >= 0.0 && v <= 1.0; }, "mu must lie in [0, 1]"));
                out.push_back(custom("decoder", [](C &c, const Context &ctx, const Entry &e) {
                    const auto d = parse_decoder(text(ctx, e));
                    if (!d)
                        ctx.fail(e, "expected one of zf, mmse, mrc, single");
                    c.a.decoder = *d;
                }));
                out.push_back(custom(
                    "sweep.user_counts",
                    [](C &c, const Context &ctx, const Entry &e) {
                        c.grid.user_counts.clear();
                        for (const auto &item : sequence(ctx, e))
                            c.grid.user_counts.push_back(count(ctx, e, item, 1));
                    },
                    false));
                out.push_back(custom(
                    "sweep.mus",
                    [](C &c, const Context &ctx, const Entry &e) {
                        c.grid.mus = reals(ctx, e, [](double v) { return v >= 0.0 && v <= 1.0; }, "mu must lie in [0, 1]");
                    },
                    false));
            }
            return out;
        }
    }

    /// Parses the YAML scenario schema. Either `preset:` seeds every field with
    /// the named defaults, or `system: A|B` starts from nothing and every field
    /// of that system must be given. Nested maps read as dotted keys.
    inline ScenarioConfig parse_scenario_text(const std::string &text, const std::string &origin = "<scenario>")
    {
        const parse::Context ctx{origin};
        YAML::Node root;
        try
        {
            root = YAML::Load(text);
        }
        catch (const YAML::ParserException &e)
        {
            throw ParseError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
        }
        if (!root.IsMap())
            ctx.fail("expected a mapping of keys to values");

        std::vector<parse::Entry> entries;
        parse::flatten(root, "", entries, ctx);

        ScenarioConfig cfg;
        const parse::Entry *preset_entry = nullptr, *system_entry = nullptr;
        for (const auto &e : entries)
        {
            if (e.key == "preset")
                preset_entry = &e;
            else if (e.key == "system")
                system_entry = &e;
        }

        std::optional<System> system;
        if (system_entry)
        {
            const auto s = parse::text(ctx, *system_entry);
            if (s == "A" || s == "a")
                system = System::a;
            else if (s == "B" || s == "b")
                system = System::b;
            else
                ctx.fail(*system_entry, "expected A or B");
        }
        if (preset_entry)
        {
            const auto p = preset(parse::text(ctx, *preset_entry));
            if (!p)
                ctx.fail(*preset_entry, "unknown preset '" + preset_entry->node.Scalar() + "'");
            if (system && *system != p->system)
                ctx.fail(*system_entry, "conflicts with the preset's system");
            cfg = *p;
        }
        else if (system)
        {
            cfg.system = *system;
        }
        else
        {
            ctx.fail("missing required field 'preset' or 'system'");
        }

        const auto table = parse::fields(cfg.system);
        std::map<std::string, const parse::Entry *> seen_slot;
        for (const auto &e : entries)
        {
            if (&e == preset_entry || &e == system_entry)
                continue;
            const auto f = std::find_if(table.begin(), table.end(), [&](const parse::Field &x) { return x.key == e.key; });
            if (f == table.end())
                ctx.fail(e, "unknown key for System " + std::string(to_string(cfg.system)));
            if (const auto prev = seen_slot.find(f->slot); prev != seen_slot.end())
                ctx.fail(e, "duplicates '" + prev->second->key + "' on line " + std::to_string(prev->second->line));
            seen_slot[f->slot] = &e;
            f->set(cfg, ctx, e);
        }

        if (!preset_entry)
            for (const auto &f : table)
                if (f.required && !seen_slot.contains(f.slot))
                    ctx.fail("missing required field '" + f.slot + "'");

        try
        {
            if (cfg.system == System::a)
                validate(cfg.a);
            else
                validate(cfg.b);
        }
        catch (const std::invalid_argument &e)
        {
            ctx.fail(std::string("out of range: ") + e.what());
        }
        return cfg;
    }

    inline ScenarioConfig parse_scenario_file(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ParseError(path.string() + ": cannot open file");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_scenario_text(ss.str(), path.string());
    }
}
