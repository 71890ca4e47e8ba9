// SPDX-License-Identifier: Apache-2.0

#include "vafim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace vafim {

namespace {

// Document model ---------------------------------------------------------------

struct Value;
using Fields = std::vector<std::pair<std::string, Value>>;

struct Value
{
    enum class Kind
    {
        number,
        boolean,
        string,
        array,
        table,
    };

    Kind kind = Kind::number;
    std::size_t line = 0;
    double number = 0.0;
    bool integer = false;
    bool boolean = false;
    std::string text;
    std::vector<Value> items;
    Fields fields;
};

struct Table
{
    std::size_t line = 0;
    Fields fields;
};

struct Document
{
    std::map<std::string, Table> sections;
    std::vector<Table> reflectors;
};

const char *kind_name(Value::Kind kind)
{
    switch (kind)
    {
    case Value::Kind::number:
        return "number";
    case Value::Kind::boolean:
        return "boolean";
    case Value::Kind::string:
        return "string";
    case Value::Kind::array:
        return "array";
    case Value::Kind::table:
        return "inline table";
    }
    return "value";
}

// Lexing -----------------------------------------------------------------------

bool is_key_char(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
}

class LineParser
{
public:
    LineParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

    void skip_space()
    {
        while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r'))
            ++pos_;
    }

    bool at_end()
    {
        skip_space();
        return pos_ >= s_.size() || s_[pos_] == '#';
    }

    bool consume(char c)
    {
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == c)
        {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char *context)
    {
        if (!consume(c))
            fail(std::string("expected '") + c + "' " + context);
    }

    std::string key()
    {
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == '"')
            return quoted();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && is_key_char(s_[pos_]))
            ++pos_;
        if (start == pos_)
            fail("expected a key");
        return std::string(s_.substr(start, pos_ - start));
    }

    Value value()
    {
        skip_space();
        if (pos_ >= s_.size())
            fail("missing value");
        Value v;
        v.line = line_;
        const char c = s_[pos_];
        if (c == '"' || c == '\'')
        {
            v.kind = Value::Kind::string;
            v.text = c == '"' ? quoted() : literal();
        }
        else if (c == '[')
        {
            ++pos_;
            v.kind = Value::Kind::array;
            if (!consume(']'))
            {
                do
                {
                    if (consume(']'))
                        return v; // trailing comma
                    v.items.push_back(value());
                } while (consume(','));
                expect(']', "to close the array");
            }
        }
        else if (c == '{')
        {
            ++pos_;
            v.kind = Value::Kind::table;
            if (!consume('}'))
            {
                do
                {
                    std::string k = key();
                    expect('=', "after key");
                    add_field(v.fields, std::move(k), value(), line_);
                } while (consume(','));
                expect('}', "to close the inline table");
            }
        }
        else if (s_.substr(pos_, 4) == "true" || s_.substr(pos_, 5) == "false")
        {
            v.kind = Value::Kind::boolean;
            v.boolean = s_[pos_] == 't';
            pos_ += v.boolean ? 4 : 5;
        }
        else
        {
            number(v);
        }
        return v;
    }

    static void add_field(Fields &fields, std::string key, Value value, std::size_t line)
    {
        for (const auto &f : fields)
            if (f.first == key)
                throw ConfigError(line, "duplicate key '" + key + "'");
        fields.emplace_back(std::move(key), std::move(value));
    }

    [[noreturn]] void fail(const std::string &message) const { throw ConfigError(line_, message); }

private:
    std::string quoted()
    {
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"')
        {
            char c = s_[pos_++];
            if (c == '\\')
            {
                if (pos_ >= s_.size())
                    break;
                const char e = s_[pos_++];
                switch (e)
                {
                case '"':
                case '\\':
                    c = e;
                    break;
                case 'n':
                    c = '\n';
                    break;
                case 't':
                    c = '\t';
                    break;
                default:
                    fail(std::string("unsupported escape '\\") + e + "'");
                }
            }
            out.push_back(c);
        }
        if (pos_ >= s_.size())
            fail("unterminated string");
        ++pos_;
        return out;
    }

    std::string literal()
    {
        ++pos_;
        const std::size_t end = s_.find('\'', pos_);
        if (end == std::string_view::npos)
            fail("unterminated string");
        std::string out(s_.substr(pos_, end - pos_));
        pos_ = end + 1;
        return out;
    }

    void number(Value &v)
    {
        std::size_t end = pos_;
        while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                                   s_[end] == '+' || s_[end] == '-' || s_[end] == '_'))
            ++end;
        std::string token(s_.substr(pos_, end - pos_));
        if (token.empty())
            fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        std::string digits;
        for (std::size_t i = 0; i < token.size(); ++i)
        {
            if (token[i] == '_')
                continue;
            if (token[i] == '+' && i == 0)
                continue;
            digits.push_back(token[i]);
        }
        if (digits == "inf" || digits == "-inf" || digits == "nan" || digits == "-nan")
            fail("non-finite number '" + token + "'");
        double parsed = 0.0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), parsed);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || !std::isfinite(parsed))
            fail("malformed number '" + token + "'");
        v.kind = Value::Kind::number;
        v.number = parsed;
        v.integer = digits.find_first_of(".eE") == std::string::npos;
        pos_ = end;
    }

    std::string_view s_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

Document parse_document(std::string_view text)
{
    static const char *const kSections[] = {"ofdm", "tx", "rx", "clock", "paths"};
    Document doc;
    Table *current = nullptr;

    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size())
    {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        const std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;

        LineParser p(line, line_no);
        if (p.at_end())
        {
            if (end == text.size())
                break;
            continue;
        }
        if (p.consume('['))
        {
            const bool array_table = p.consume('[');
            const std::string name = p.key();
            p.expect(']', "to close the section header");
            if (array_table)
                p.expect(']', "to close the section header");
            if (!p.at_end())
                p.fail("trailing characters after section header");

            if (array_table)
            {
                if (name != "reflectors")
                    p.fail("unknown array section [[" + name + "]]");
                doc.reflectors.push_back(Table{line_no, {}});
                current = &doc.reflectors.back();
            }
            else
            {
                if (std::find(std::begin(kSections), std::end(kSections), name) == std::end(kSections))
                    p.fail(name == "reflectors" ? "reflectors must be declared as [[reflectors]]"
                                                : "unknown section [" + name + "]");
                if (doc.sections.count(name) != 0)
                    p.fail("duplicate section [" + name + "]");
                current = &(doc.sections[name] = Table{line_no, {}});
            }
        }
        else
        {
            if (current == nullptr)
                p.fail("key outside of any section");
            std::string key = p.key();
            p.expect('=', "after key");
            Value v = p.value();
            if (!p.at_end())
                p.fail("trailing characters after value");
            LineParser::add_field(current->fields, std::move(key), std::move(v), line_no);
        }
        if (end == text.size())
            break;
    }
    return doc;
}

// Schema -----------------------------------------------------------------------

class Reader
{
public:
    Reader(const Fields &fields, std::size_t line, std::string where, std::initializer_list<const char *> allowed)
        : fields_(fields), line_(line), where_(std::move(where))
    {
        for (const auto &[key, value] : fields_)
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char *a) { return key == a; }))
                throw ConfigError(value.line, "unknown key '" + key + "' in " + where_);
    }

    const Value *find(const char *key) const
    {
        for (const auto &f : fields_)
            if (f.first == key)
                return &f.second;
        return nullptr;
    }

    const Value &require(const char *key) const
    {
        const Value *v = find(key);
        if (v == nullptr)
            throw ConfigError(line_, "missing key '" + std::string(key) + "' in " + where_);
        return *v;
    }

    static const Value &typed(const Value &v, Value::Kind kind, const char *key)
    {
        if (v.kind != kind)
            throw ConfigError(v.line, "'" + std::string(key) + "' must be a " + kind_name(kind) + ", got " +
                                          kind_name(v.kind));
        return v;
    }

    double number(const char *key, std::optional<double> fallback = std::nullopt) const
    {
        const Value *v = find(key);
        if (v == nullptr && fallback)
            return *fallback;
        return typed(v ? *v : require(key), Value::Kind::number, key).number;
    }

    long long integer(const char *key, std::optional<long long> fallback = std::nullopt) const
    {
        const Value *v = find(key);
        if (v == nullptr && fallback)
            return *fallback;
        const Value &n = typed(v ? *v : require(key), Value::Kind::number, key);
        if (!n.integer)
            throw ConfigError(n.line, "'" + std::string(key) + "' must be an integer");
        return static_cast<long long>(n.number);
    }

    bool boolean(const char *key, bool fallback) const
    {
        const Value *v = find(key);
        return v ? typed(*v, Value::Kind::boolean, key).boolean : fallback;
    }

    Point2 point(const char *key) const
    {
        const Value &v = typed(require(key), Value::Kind::array, key);
        if (v.items.size() != 2)
            throw ConfigError(v.line, "'" + std::string(key) + "' must have two coordinates");
        return {typed(v.items[0], Value::Kind::number, key).number, typed(v.items[1], Value::Kind::number, key).number};
    }

    std::size_t line() const { return line_; }

private:
    const Fields &fields_;
    std::size_t line_;
    std::string where_;
};

OfdmConfig read_ofdm(const Document &doc)
{
    const auto it = doc.sections.find("ofdm");
    const Table table = it != doc.sections.end() ? it->second : Table{};
    const Reader r(table.fields, table.line, "[ofdm]",
                   {"f_c_hz", "n_subcarriers", "delta_f_hz", "pilot_index_min", "pilot_index_max", "tx_power_dbm",
                    "noise_figure_db", "n0_dbm_hz", "pilot_seed"});
    OfdmConfig c;
    c.carrier_hz = r.number("f_c_hz", 38e9);
    c.n_subcarriers = static_cast<int>(r.integer("n_subcarriers", 1024));
    c.spacing_hz = r.number("delta_f_hz", 120e3);
    const long long lo = r.integer("pilot_index_min", -420);
    const long long hi = r.integer("pilot_index_max", 420);
    if (lo > hi)
        throw ConfigError(table.line, "pilot_index_min exceeds pilot_index_max");
    for (long long p = lo; p <= hi; ++p)
        if (p != 0)
            c.subcarriers.push_back(static_cast<int>(p));
    c.tx_power_dbm = r.number("tx_power_dbm", 0.0);
    c.noise_figure_db = r.number("noise_figure_db", 8.0);
    c.noise_psd_dbm_hz = r.number("n0_dbm_hz", -174.0);
    const long long seed = r.integer("pilot_seed", 1);
    if (seed < 0)
        throw ConfigError(table.line, "pilot_seed must be non-negative");
    c.pilot_seed = static_cast<std::uint64_t>(seed);
    try
    {
        c.validate();
    }
    catch (const Error &e)
    {
        throw ConfigError(table.line, e.what());
    }
    return c;
}

ArrayGeometry read_array(const Value &v, double wavelength)
{
    if (v.kind != Value::Kind::table)
        throw ConfigError(v.line, "'array' must be an inline table");
    const Reader r(v.fields, v.line, "array", {"type", "n_elements", "spacing_m", "radius_m"});
    const Value &type = Reader::typed(r.require("type"), Value::Kind::string, "type");
    const long long n = r.integer("n_elements");
    if (n < 1)
        throw ConfigError(v.line, "n_elements must be at least 1");
    const auto count = static_cast<std::size_t>(n);
    if (type.text == "ula")
    {
        if (r.find("radius_m"))
            throw ConfigError(v.line, "radius_m does not apply to a ULA");
        const double spacing = r.number("spacing_m", wavelength / 2.0);
        if (!(spacing > 0.0))
            throw ConfigError(v.line, "spacing_m must be positive");
        return ArrayGeometry::ula(count, spacing);
    }
    if (type.text == "uca")
    {
        if (r.find("spacing_m"))
            throw ConfigError(v.line, "spacing_m does not apply to a UCA");
        const double fallback =
            count > 1 ? wavelength / (4.0 * std::sin(std::numbers::pi / static_cast<double>(count))) : 0.0;
        const double radius = r.number("radius_m", fallback);
        if (!(radius >= 0.0))
            throw ConfigError(v.line, "radius_m must be non-negative");
        return ArrayGeometry::uca(count, radius);
    }
    throw ConfigError(type.line, "array type must be \"ula\" or \"uca\", got \"" + type.text + "\"");
}

const Table &require_section(const Document &doc, const char *name)
{
    const auto it = doc.sections.find(name);
    if (it == doc.sections.end())
        throw ConfigError(0, "missing section [" + std::string(name) + "]");
    return it->second;
}

struct Node
{
    Point2 position;
    double orientation;
    ArrayGeometry array;
};

Node read_node(const Document &doc, const char *name, double wavelength)
{
    const Table &t = require_section(doc, name);
    const Reader r(t.fields, t.line, "[" + std::string(name) + "]", {"position_m", "orientation_rad", "array"});
    Node node{r.point("position_m"), r.number("orientation_rad", 0.0), ArrayGeometry::single()};
    if (const Value *a = r.find("array"))
        node.array = read_array(*a, wavelength);
    return node;
}

VaPrior read_va_prior(const Value &v)
{
    if (v.kind == Value::Kind::string)
    {
        if (v.text == "none")
            return VaPrior::none();
        if (v.text == "perfect")
            return VaPrior::perfect();
        throw ConfigError(v.line, "prior must be \"none\", \"perfect\" or an inline table");
    }
    if (v.kind != Value::Kind::table)
        throw ConfigError(v.line, "prior must be \"none\", \"perfect\" or an inline table");
    const Reader r(v.fields, v.line, "prior", {"sigma_par_m", "sigma_perp_m", "rho"});
    try
    {
        return VaPrior::finite(r.number("sigma_par_m"), r.number("sigma_perp_m"), r.number("rho", 0.0));
    }
    catch (const ConfigError &)
    {
        throw;
    }
    catch (const Error &e)
    {
        throw ConfigError(v.line, e.what());
    }
}

ClockPrior read_clock_prior(const Value &v)
{
    if (v.kind == Value::Kind::string)
    {
        if (v.text == "none")
            return ClockPrior::none();
        if (v.text == "perfect")
            return ClockPrior::perfect();
    }
    else if (v.kind == Value::Kind::number)
    {
        if (!(v.number > 0.0))
            throw ConfigError(v.line, "sigma_clk_s must be positive");
        return ClockPrior::finite(v.number);
    }
    throw ConfigError(v.line, "sigma_clk_s must be a number, \"none\" or \"perfect\"");
}

} // namespace

Experiment parse_config(std::string_view text)
{
    const Document doc = parse_document(text);
    Experiment e;
    e.ofdm = read_ofdm(doc);

    const Node tx = read_node(doc, "tx", e.ofdm.wavelength());
    const Node rx = read_node(doc, "rx", e.ofdm.wavelength());
    e.scenario.tx_position = tx.position;
    e.scenario.tx_orientation = tx.orientation;
    e.scenario.tx_array = tx.array;
    e.scenario.rx_position = rx.position;
    e.scenario.rx_orientation = rx.orientation;
    e.scenario.rx_array = rx.array;

    if (const auto it = doc.sections.find("clock"); it != doc.sections.end())
    {
        const Reader r(it->second.fields, it->second.line, "[clock]", {"d_clk_m", "sigma_clk_s"});
        e.scenario.clock_offset = r.number("d_clk_m", 0.0);
        if (const Value *v = r.find("sigma_clk_s"))
            e.clock = read_clock_prior(*v);
    }

    for (const Table &t : doc.reflectors)
    {
        const Reader r(t.fields, t.line, "[[reflectors]]", {"anchor_point_m", "normal_angle_rad", "gamma", "prior"});
        e.scenario.reflectors.emplace_back(r.point("anchor_point_m"), r.number("normal_angle_rad"));
        const double gamma = r.number("gamma");
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw ConfigError(r.require("gamma").line, "gamma must lie in [0, 1]");
        e.gammas.push_back(gamma);
        e.reflector_priors.push_back(r.find("prior") ? read_va_prior(*r.find("prior")) : VaPrior::none());
    }

    const auto paths = doc.sections.find("paths");
    const Table path_table = paths != doc.sections.end() ? paths->second : Table{};
    const Reader r(path_table.fields, path_table.line, "[paths]", {"include_los", "reflector_indices"});
    e.scenario.paths.include_los = r.boolean("include_los", false);
    if (const Value *v = r.find("reflector_indices"))
    {
        Reader::typed(*v, Value::Kind::array, "reflector_indices");
        for (const Value &item : v->items)
        {
            if (item.kind != Value::Kind::number || !item.integer)
                throw ConfigError(item.line, "reflector_indices must hold integers");
            if (item.number < 1 || item.number > static_cast<double>(e.scenario.reflectors.size()))
                throw ConfigError(item.line, "reflector index " + format_number(item.number) + " out of range 1.." +
                                                 std::to_string(e.scenario.reflectors.size()));
            const auto index = static_cast<std::size_t>(item.number) - 1;
            if (std::find(e.scenario.paths.reflectors.begin(), e.scenario.paths.reflectors.end(), index) !=
                e.scenario.paths.reflectors.end())
                throw ConfigError(item.line, "reflector index listed twice");
            e.scenario.paths.reflectors.push_back(index);
        }
    }
    if (e.scenario.path_count() == 0)
        throw ConfigError(path_table.line, "at least one active path is required");
    return e;
}

std::string read_text_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(0, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace vafim
