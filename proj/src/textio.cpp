// Copyright 2026 The fermode Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fermode/textio.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <utility>

#include "fermode/error.hpp"

namespace fermode {

namespace {

using Json = nlohmann::ordered_json;

// Character cursor with 1-based line/column bookkeeping.
class Cursor {
   public:
    explicit Cursor(std::string_view text) : text_(text) {}

    bool at_end() const {
        return pos_ >= text_.size();
    }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }
    char take() {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }
    std::size_t line() const {
        return line_;
    }
    std::size_t column() const {
        return column_;
    }
    std::string_view rest_from(std::size_t start) const {
        return text_.substr(start, pos_ - start);
    }
    std::size_t offset() const {
        return pos_;
    }

    // Spaces, tabs and comments; newlines too unless `stop_at_newline`.
    void skip_blank(bool stop_at_newline = false) {
        while (!at_end()) {
            const char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n') {
                    take();
                }
            } else if (c == ' ' || c == '\t' || c == '\r' || (c == '\n' && !stop_at_newline)) {
                take();
            } else {
                return;
            }
        }
    }

    [[noreturn]] void fail(ErrorKind kind, const std::string &message) const {
        throw ParseError(kind, line_, column_, message);
    }

   private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

struct Position {
    std::size_t line;
    std::size_t column;
};

Position here(const Cursor &c) {
    return {c.line(), c.column()};
}

[[noreturn]] void fail_at(Position p, ErrorKind kind, const std::string &message) {
    throw ParseError(kind, p.line, p.column, message);
}

std::string describe_char(char c) {
    if (c == '\0') {
        return "end of input";
    }
    if (c == '\n') {
        return "end of line";
    }
    if (std::isprint(static_cast<unsigned char>(c)) == 0) {
        return "byte 0x" + std::to_string(static_cast<unsigned char>(c));
    }
    return std::string("'") + c + "'";
}

bool is_digit(char c) {
    return c >= '0' && c <= '9';
}

bool is_word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || is_digit(c);
}

void expect(Cursor &c, char wanted) {
    if (c.peek() != wanted) {
        c.fail(ErrorKind::SyntaxError, std::string("expected '") + wanted + "', found " + describe_char(c.peek()));
    }
    c.take();
}

std::string read_word(Cursor &c) {
    std::string out;
    while (is_word_char(c.peek())) {
        out.push_back(c.take());
    }
    return out;
}

std::size_t read_unsigned(Cursor &c, const char *what) {
    if (!is_digit(c.peek())) {
        c.fail(ErrorKind::SyntaxError, std::string("expected ") + what + ", found " + describe_char(c.peek()));
    }
    const Position start = here(c);
    std::size_t value = 0;
    while (is_digit(c.peek())) {
        const std::size_t digit = static_cast<std::size_t>(c.take() - '0');
        if (value > 1'000'000) {
            fail_at(start, ErrorKind::SemanticError, std::string(what) + " is too large");
        }
        value = value * 10 + digit;
    }
    return value;
}

long read_integer(Cursor &c, const char *what) {
    bool negative = false;
    if (c.peek() == '+' || c.peek() == '-') {
        negative = c.take() == '-';
    }
    const long magnitude = static_cast<long>(read_unsigned(c, what));
    return negative ? -magnitude : magnitude;
}

// REAL := [+-]? (digits [. digits?] | . digits) ([eE] [+-]? digits)?
double read_real(Cursor &c) {
    const Position start = here(c);
    const std::size_t begin = c.offset();
    if (c.peek() == '+' || c.peek() == '-') {
        c.take();
    }
    bool mantissa = false;
    while (is_digit(c.peek())) {
        c.take();
        mantissa = true;
    }
    if (c.peek() == '.') {
        c.take();
        while (is_digit(c.peek())) {
            c.take();
            mantissa = true;
        }
    }
    if (!mantissa) {
        fail_at(start, ErrorKind::SyntaxError, "expected a number, found " + describe_char(c.peek()));
    }
    if ((c.peek() == 'e' || c.peek() == 'E') &&
        (is_digit(c.peek(1)) || ((c.peek(1) == '+' || c.peek(1) == '-') && is_digit(c.peek(2))))) {
        c.take();
        if (c.peek() == '+' || c.peek() == '-') {
            c.take();
        }
        while (is_digit(c.peek())) {
            c.take();
        }
    }
    std::string_view token = c.rest_from(begin);
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value)) {
        fail_at(start, ErrorKind::SyntaxError, "number '" + std::string(token) + "' is out of range");
    }
    return value;
}

// COMPLEX := REAL | REAL ("+"|"-") REAL "i", written without blanks.
Complex read_complex(Cursor &c) {
    const double re = read_real(c);
    if (c.peek() == 'i') {
        c.fail(ErrorKind::SyntaxError, "imaginary literal needs an explicit real part, e.g. 0+1i");
    }
    if ((c.peek() == '+' || c.peek() == '-') && (is_digit(c.peek(1)) || c.peek(1) == '.')) {
        const bool negative = c.take() == '-';
        const double im = read_real(c);
        if (c.peek() != 'i') {
            c.fail(ErrorKind::SyntaxError, "expected 'i' after the imaginary part, found " + describe_char(c.peek()));
        }
        c.take();
        return {re, negative ? -im : im};
    }
    return {re, 0.0};
}

std::string read_bits(Cursor &c, std::size_t n_modes, const char *what) {
    const Position start = here(c);
    std::string bits;
    while (c.peek() == '0' || c.peek() == '1') {
        bits.push_back(c.take());
    }
    if (bits.empty()) {
        c.fail(ErrorKind::SyntaxError, std::string("expected occupation bits in ") + what + ", found " +
                                           describe_char(c.peek()));
    }
    if (is_digit(c.peek())) {
        c.fail(ErrorKind::SyntaxError, std::string("occupation numbers are 0 or 1, found ") + describe_char(c.peek()));
    }
    if (bits.size() != n_modes) {
        fail_at(start, ErrorKind::SemanticError, std::string(what) + " names " + std::to_string(bits.size()) +
                                                     " modes, document has " + std::to_string(n_modes));
    }
    return bits;
}

struct FamilyLayout {
    char diagonal_letter;
    std::size_t diagonal_count;
    char coherence_letter;
    std::size_t coherence_count;
};

constexpr FamilyLayout kTwoModeLayout{'a', 4, 'b', 6};
constexpr FamilyLayout kThreeModeLayout{'m', 8, 'n', 6};

std::string layout_names(const FamilyLayout &l) {
    return std::string(1, l.diagonal_letter) + "1.." + l.diagonal_letter + std::to_string(l.diagonal_count) + ", " +
           l.coherence_letter + "1.." + l.coherence_letter + std::to_string(l.coherence_count);
}

// Reads `{ NAME=COMPLEX ... }`; returns diagonal and coherence values.
std::pair<std::vector<double>, std::vector<Complex>> read_family(Cursor &c, const std::string &name,
                                                                 const FamilyLayout &layout) {
    std::vector<double> diagonal(layout.diagonal_count, 0.0);
    std::vector<Complex> coherence(layout.coherence_count, 0.0);
    std::set<std::string> seen;
    c.skip_blank();
    expect(c, '{');
    for (;;) {
        c.skip_blank();
        if (c.at_end()) {
            c.fail(ErrorKind::SyntaxError, "unterminated " + name + " block: expected '}'");
        }
        if (c.peek() == '}') {
            c.take();
            break;
        }
        const Position at = here(c);
        const std::string key = read_word(c);
        if (key.empty()) {
            c.fail(ErrorKind::SyntaxError, "expected a coefficient name, found " + describe_char(c.peek()));
        }
        c.skip_blank();
        expect(c, '=');
        c.skip_blank();
        const Position value_at = here(c);
        const Complex value = read_complex(c);

        std::size_t index = 0;
        const bool numbered = key.size() >= 2 && key.size() <= 3 &&
                              std::all_of(key.begin() + 1, key.end(), is_digit) &&
                              std::from_chars(key.data() + 1, key.data() + key.size(), index).ec == std::errc();
        const bool is_diagonal = numbered && key[0] == layout.diagonal_letter && index >= 1 &&
                                 index <= layout.diagonal_count;
        const bool is_coherence = numbered && key[0] == layout.coherence_letter && index >= 1 &&
                                  index <= layout.coherence_count;
        if (!is_diagonal && !is_coherence) {
            fail_at(at, ErrorKind::SemanticError, "unknown coefficient '" + key + "' for " + name + " (expected " +
                                                      layout_names(layout) + ")");
        }
        if (!seen.insert(key).second) {
            fail_at(at, ErrorKind::SemanticError, "coefficient '" + key + "' given twice");
        }
        if (is_diagonal) {
            if (value.imag() != 0.0) {
                fail_at(value_at, ErrorKind::SemanticError, "diagonal coefficient '" + key + "' must be real");
            }
            diagonal[index - 1] = value.real();
        } else {
            coherence[index - 1] = value;
        }
    }
    return {diagonal, coherence};
}

std::string format_real(double x) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", x);
    return buf.data();
}

std::string format_complex(Complex z) {
    std::string out = format_real(z.real());
    if (z.imag() != 0.0) {
        out += std::signbit(z.imag()) ? "-" : "+";
        out += format_real(std::abs(z.imag()));
        out += "i";
    }
    return out;
}

// --- JSON helpers -----------------------------------------------------------

double round12(double x) {
    if (x == 0.0 || !std::isfinite(x)) {
        return x == 0.0 ? 0.0 : x;
    }
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.12g", x);
    const double rounded = std::strtod(buf.data(), nullptr);
    return rounded == 0.0 ? 0.0 : rounded;
}

std::string basis_label(std::size_t index, std::size_t n_modes) {
    return OccupationState::from_index(n_modes, index).bits();
}

Json matrix_json(const ComplexMatrix &m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(Json::array({round12(m(r, c).real()), round12(m(r, c).imag())}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Json partition_json(const ModePartition &p) {
    return Json{{"n_modes", p.n_modes()}, {"kept", p.kept()}, {"traced", p.traced()}};
}

Json verdict_json(const MappingVerdict &v) {
    Json pattern = Json::array();
    for (const auto &[r, c] : v.pattern.allowed()) {
        pattern.push_back(Json::array({basis_label(r, v.n_modes), basis_label(c, v.n_modes)}));
    }
    Json partitions = Json::array();
    for (const auto &p : v.partitions) {
        partitions.push_back(partition_json(p));
    }
    Json witnesses = Json::array();
    for (const auto &w : v.witnesses) {
        witnesses.push_back(w.to_string());
    }
    Json obstruction = Json::array();
    for (const auto &eq : v.obstruction) {
        const std::size_t k = eq.partition.kept().size();
        obstruction.push_back(Json{{"partition", partition_json(eq.partition)},
                                   {"row", basis_label(eq.row, v.n_modes)},
                                   {"col", basis_label(eq.col, v.n_modes)},
                                   {"reduced_row", basis_label(eq.reduced_row, k)},
                                   {"reduced_col", basis_label(eq.reduced_col, k)},
                                   {"sign", eq.sign},
                                   {"equation", eq.describe()}});
    }
    return Json{{"n_modes", v.n_modes},
                {"allowed_coherences", std::move(pattern)},
                {"partitions", std::move(partitions)},
                {"exists", v.exists},
                {"witness_count", v.witnesses.size()},
                {"witnesses", std::move(witnesses)},
                {"obstruction", std::move(obstruction)}};
}

Json header(const char *kind) {
    return Json{{"schema", kReportSchema}, {"kind", kind}};
}

std::string render(const Json &j) {
    return j.dump(2) + "\n";
}

}  // namespace

// --- state documents --------------------------------------------------------

StateDocument parse_state(std::string_view text) {
    Cursor c(text);
    StateDocument doc;

    c.skip_blank();
    const Position header_at = here(c);
    if (read_word(c) != "modes") {
        fail_at(header_at, ErrorKind::SyntaxError, "document must start with 'modes N'");
    }
    c.skip_blank(true);
    const Position count_at = here(c);
    doc.n_modes = read_unsigned(c, "a mode count");
    if (doc.n_modes < 1 || doc.n_modes > kMaxModes) {
        fail_at(count_at, ErrorKind::SemanticError, "mode count must be in 1.." + std::to_string(kMaxModes));
    }
    c.skip_blank(true);
    if (is_word_char(c.peek()) && !is_digit(c.peek())) {
        const Position word_at = here(c);
        if (read_word(c) != "charges") {
            fail_at(word_at, ErrorKind::SyntaxError, "expected 'charges' or end of header line");
        }
        ChargePattern charges;
        c.skip_blank(true);
        while (!c.at_end() && c.peek() != '\n') {
            charges.charges.push_back(static_cast<int>(read_integer(c, "a charge")));
            c.skip_blank(true);
        }
        if (charges.charges.size() != doc.n_modes) {
            fail_at(word_at, ErrorKind::SemanticError, "expected " + std::to_string(doc.n_modes) + " charges, got " +
                                                           std::to_string(charges.charges.size()));
        }
        doc.charges = std::move(charges);
    }
    if (!c.at_end() && c.peek() != '\n') {
        c.fail(ErrorKind::SyntaxError, "unexpected " + describe_char(c.peek()) + " in header");
    }

    std::vector<StateTerm> terms;
    std::set<std::pair<std::size_t, std::size_t>> placed;
    bool have_family = false;
    std::optional<Position> first_item;
    for (;;) {
        c.skip_blank();
        if (c.at_end()) {
            break;
        }
        const Position at = here(c);
        if (!first_item) {
            first_item = at;
        }
        if (have_family) {
            fail_at(at, ErrorKind::SemanticError, "a family block must be the only body item");
        }
        if (is_word_char(c.peek()) && !is_digit(c.peek())) {
            const std::string word = read_word(c);
            if (word != "two_mode" && word != "three_mode") {
                fail_at(at, ErrorKind::SyntaxError, "unknown keyword '" + word + "'");
            }
            if (!terms.empty()) {
                fail_at(at, ErrorKind::SemanticError, "a family block cannot be combined with terms");
            }
            const bool two = word == "two_mode";
            if (doc.n_modes != (two ? 2u : 3u)) {
                fail_at(at, ErrorKind::SemanticError, word + " needs modes " + (two ? "2" : "3") +
                                                          ", document has " + std::to_string(doc.n_modes));
            }
            const auto [diagonal, coherence] = read_family(c, word, two ? kTwoModeLayout : kThreeModeLayout);
            if (two) {
                TwoModeCoefficients k;
                std::copy(diagonal.begin(), diagonal.end(), k.alpha.begin());
                std::copy(coherence.begin(), coherence.end(), k.beta.begin());
                doc.body = k;
            } else {
                ThreeModeCoefficients k;
                std::copy(diagonal.begin(), diagonal.end(), k.mu.begin());
                std::copy(coherence.begin(), coherence.end(), k.nu.begin());
                doc.body = k;
            }
            have_family = true;
            continue;
        }
        if (!(is_digit(c.peek()) || c.peek() == '+' || c.peek() == '-' || c.peek() == '.')) {
            c.fail(ErrorKind::SyntaxError, "expected a term or a family block, found " + describe_char(c.peek()));
        }
        const Complex coefficient = read_complex(c);
        c.skip_blank();
        expect(c, '*');
        c.skip_blank();
        expect(c, '|');
        const std::string ket = read_bits(c, doc.n_modes, "ket");
        expect(c, '>');
        c.skip_blank();
        expect(c, '<');
        const std::string bra = read_bits(c, doc.n_modes, "bra");
        expect(c, '|');

        StateTerm term{coefficient, OccupationState::from_bits(ket), OccupationState::from_bits(bra)};
        const std::size_t r = term.ket.index();
        const std::size_t col = term.bra.index();
        if (r == col && coefficient.imag() != 0.0) {
            fail_at(at, ErrorKind::SemanticError, "diagonal term |" + ket + "><" + bra + "| must be real");
        }
        if (!placed.emplace(r, col).second) {
            fail_at(at, ErrorKind::SemanticError, "term |" + ket + "><" + bra + "| given twice");
        }
        if (r != col && placed.count({col, r}) != 0) {
            fail_at(at, ErrorKind::SemanticError, "term |" + ket + "><" + bra +
                                                      "| is the conjugate of an earlier term (implied automatically)");
        }
        terms.push_back(std::move(term));
    }
    if (!have_family) {
        doc.body = std::move(terms);
    }
    try {
        assemble(doc);
    } catch (const Error &e) {
        fail_at(first_item.value_or(header_at), ErrorKind::SemanticError, e.detail());
    }
    return doc;
}

ComplexMatrix assemble_matrix(const StateDocument &doc) {
    const std::size_t dim = std::size_t{1} << doc.n_modes;
    ComplexMatrix m(dim, dim);
    if (const auto *terms = std::get_if<std::vector<StateTerm>>(&doc.body)) {
        for (const StateTerm &t : *terms) {
            if (t.ket.n_modes() != doc.n_modes || t.bra.n_modes() != doc.n_modes) {
                throw Error(ErrorKind::SemanticError, "term on the wrong number of modes");
            }
            const std::size_t r = t.ket.index();
            const std::size_t c = t.bra.index();
            m(r, c) += t.coefficient;
            if (r != c) {
                m(c, r) += std::conj(t.coefficient);
            }
        }
    } else if (const auto *two = std::get_if<TwoModeCoefficients>(&doc.body)) {
        for (std::size_t k = 0; k < 4; ++k) {
            m(k, k) = two->alpha[k];
        }
        const auto pos = two_mode_beta_positions();
        for (std::size_t k = 0; k < 6; ++k) {
            m(pos[k].first, pos[k].second) = two->beta[k];
            m(pos[k].second, pos[k].first) = std::conj(two->beta[k]);
        }
    } else {
        const auto &three = std::get<ThreeModeCoefficients>(doc.body);
        for (std::size_t k = 0; k < 8; ++k) {
            m(k, k) = three.mu[k];
        }
        const auto pos = three_mode_nu_positions();
        for (std::size_t k = 0; k < 6; ++k) {
            m(pos[k].first, pos[k].second) = three.nu[k];
            m(pos[k].second, pos[k].first) = std::conj(three.nu[k]);
        }
    }
    return m;
}

DensityOperator assemble(const StateDocument &doc) {
    try {
        return DensityOperator(doc.n_modes, assemble_matrix(doc));
    } catch (const ParseError &) {
        throw;
    } catch (const Error &e) {
        throw Error(ErrorKind::SemanticError, std::string("not a density operator (") + e.what() + ")");
    }
}

std::string serialize(const StateDocument &doc) {
    std::string out = "modes " + std::to_string(doc.n_modes);
    if (doc.charges) {
        out += " charges";
        for (const int q : doc.charges->charges) {
            out += " " + std::to_string(q);
        }
    }
    out += "\n";
    auto family = [&](const char *name, char dl, const auto &diag, char cl, const auto &coh) {
        out += name;
        out += " {";
        for (std::size_t k = 0; k < diag.size(); ++k) {
            out += std::string(" ") + dl + std::to_string(k + 1) + "=" + format_real(diag[k]);
        }
        for (std::size_t k = 0; k < coh.size(); ++k) {
            out += std::string(" ") + cl + std::to_string(k + 1) + "=" + format_complex(coh[k]);
        }
        out += " }\n";
    };
    if (const auto *terms = std::get_if<std::vector<StateTerm>>(&doc.body)) {
        for (const StateTerm &t : *terms) {
            out += format_complex(t.coefficient) + " * |" + t.ket.bits() + "><" + t.bra.bits() + "|\n";
        }
    } else if (const auto *two = std::get_if<TwoModeCoefficients>(&doc.body)) {
        family("two_mode", 'a', two->alpha, 'b', two->beta);
    } else {
        const auto &three = std::get<ThreeModeCoefficients>(doc.body);
        family("three_mode", 'm', three.mu, 'n', three.nu);
    }
    return out;
}

// --- operator strings -------------------------------------------------------

OperatorString parse_operator_string(std::string_view text, std::optional<std::size_t> n_modes) {
    Cursor c(text);
    OperatorString s;
    for (;;) {
        c.skip_blank();
        if (c.at_end()) {
            break;
        }
        const Position at = here(c);
        if (c.peek() == 'P') {
            c.take();
            expect(c, '0');
            if (is_word_char(c.peek()) || c.peek() == '^') {
                c.fail(ErrorKind::SyntaxError, "unexpected " + describe_char(c.peek()) + " after P0");
            }
            if (s.projector_position) {
                fail_at(at, ErrorKind::SemanticError, "only one vacuum projector P0 is allowed");
            }
            s.projector_position = s.factors.size();
            continue;
        }
        if (c.peek() != 'b') {
            c.fail(ErrorKind::SyntaxError, "expected bK, bK^ or P0, found " + describe_char(c.peek()));
        }
        c.take();
        const Position label_at = here(c);
        const std::size_t mode = read_unsigned(c, "a mode label");
        LadderKind kind = LadderKind::Annihilator;
        if (c.peek() == '^') {
            c.take();
            kind = LadderKind::Creator;
        }
        if (is_word_char(c.peek()) || c.peek() == '^') {
            c.fail(ErrorKind::SyntaxError, "unexpected " + describe_char(c.peek()) + " in ladder token");
        }
        if (mode == 0) {
            fail_at(label_at, ErrorKind::SemanticError, "mode labels start at 1");
        }
        if (n_modes && mode > *n_modes) {
            fail_at(label_at, ErrorKind::SemanticError, "mode " + std::to_string(mode) + " out of range 1.." +
                                                            std::to_string(*n_modes));
        }
        s.factors.push_back({kind, mode});
    }
    if (s.factors.empty() && !s.projector_position) {
        c.fail(ErrorKind::SyntaxError, "empty operator string");
    }
    return s;
}

std::string serialize(const OperatorString &s) {
    std::vector<std::string> tokens;
    for (std::size_t k = 0; k <= s.factors.size(); ++k) {
        if (s.projector_position && *s.projector_position == k) {
            tokens.emplace_back("P0");
        }
        if (k < s.factors.size()) {
            const LadderFactor &f = s.factors[k];
            tokens.push_back("b" + std::to_string(f.mode) + (f.kind == LadderKind::Creator ? "^" : ""));
        }
    }
    std::string out;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        out += (k == 0 ? "" : " ") + tokens[k];
    }
    return out;
}

// --- reports ----------------------------------------------------------------

std::string emit_report(const EntanglementReport &r) {
    Json j = header("entanglement");
    j["partition"] = partition_json(r.partition);
    if (r.entropy_of_entanglement) {
        j["entropy_of_entanglement"] = round12(*r.entropy_of_entanglement);
    }
    Json mapping{{"exists", r.mapping_exists}};
    if (r.witness) {
        mapping["witness"] = r.witness->to_string();
    }
    j["mapping"] = std::move(mapping);
    if (r.negativity) {
        j["negativity"] = round12(*r.negativity);
    }
    if (r.concurrence) {
        j["concurrence"] = round12(*r.concurrence);
    }
    if (r.eof_wootters) {
        j["eof_wootters"] = round12(*r.eof_wootters);
    }
    if (r.eof_ssr_estimate) {
        j["eof_ssr_estimate"] = Json{{"value", round12(*r.eof_ssr_estimate)}, {"status", "upper_bound"}};
    }
    j["bounds"] = Json{{"twice_negativity_le_concurrence", r.negativity_concurrence_ok},
                       {"eof_le_ssr_estimate", r.eof_ordering_ok}};
    j["bound_chain_ok"] = r.bound_chain_ok;
    j["notes"] = r.notes;
    return render(j);
}

std::string emit_report(const MappingVerdict &v) {
    Json j = header("mapping_verdict");
    const Json body = verdict_json(v);
    for (const auto &[key, value] : body.items()) {
        j[key] = value;
    }
    return render(j);
}

std::string emit_report(const CarReport &r) {
    Json j = header("car_check");
    j["n_modes"] = r.n_modes;
    j["max_residual"] = round12(r.max_residual);
    j["tolerance"] = round12(r.tolerance);
    j["ok"] = r.ok;
    return render(j);
}

std::string emit_report(const ReductionReport &r) {
    Json j = header("reduction");
    j["partition"] = partition_json(r.partition);
    Json basis = Json::array();
    for (std::size_t k = 0; k < r.reduced.rows(); ++k) {
        basis.push_back(basis_label(k, r.partition.kept().size()));
    }
    j["basis"] = std::move(basis);
    j["reduced_matrix"] = matrix_json(r.reduced);
    if (r.oracle_residual) {
        j["oracle_residual"] = round12(*r.oracle_residual);
    }
    j["notes"] = r.notes;
    return render(j);
}

std::string emit_report(const DemoReport &r) {
    Json j = header("demo");
    j["experiment"] = r.name;
    j["expected_exists"] = r.expected_exists;
    j["matches_expected"] = r.matches();
    j["verdict"] = verdict_json(r.verdict);
    return render(j);
}

}  // namespace fermode
