#include "mocheck/rational.hpp"

#include "mocheck/error.hpp"

#include <cctype>

namespace mocheck {
namespace {

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return std::string(text.substr(begin, end - begin));
}

bool all_digits(std::string_view text) {
    if (text.empty()) return false;
    for (char c : text) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

mpz_class parse_integer(std::string_view text, std::string_view whole) {
    std::string_view digits = text;
    if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) digits.remove_prefix(1);
    if (!all_digits(digits)) throw ParseError("malformed number '" + std::string(whole) + "'");
    return mpz_class(std::string(text[0] == '+' ? text.substr(1) : text), 10);
}

Rational parse_decimal(std::string_view text, std::string_view whole) {
    bool negative = false;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    long exponent = 0;
    auto e = text.find_first_of("eE");
    if (e != std::string_view::npos) {
        std::string_view exp_text = text.substr(e + 1);
        text = text.substr(0, e);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '+' || exp_text.front() == '-')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!all_digits(exp_text) || exp_text.size() > 6) throw ParseError("malformed number '" + std::string(whole) + "'");
        exponent = std::stol(std::string(exp_text));
        if (exp_negative) exponent = -exponent;
    }
    std::string digits;
    auto dot = text.find('.');
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part))) {
        throw ParseError("malformed number '" + std::string(whole) + "'");
    }
    digits.append(int_part);
    digits.append(frac_part);
    exponent -= static_cast<long>(frac_part.size());
    mpz_class numerator(digits.empty() ? std::string("0") : digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    Rational result;
    if (exponent < 0) {
        result = Rational(numerator, scale);
    } else {
        result = Rational(numerator * scale);
    }
    result.canonicalize();
    return negative ? Rational(-result) : result;
}

}  // namespace

Rational parse_rational(std::string_view raw) {
    std::string text = trim(raw);
    if (text.empty()) throw ParseError("empty number");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        mpz_class num = parse_integer(trim(std::string_view(text).substr(0, slash)), text);
        mpz_class den = parse_integer(trim(std::string_view(text).substr(slash + 1)), text);
        if (den == 0) throw ParseError("zero denominator in '" + text + "'");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    return parse_decimal(text, text);
}

std::string to_string(const Rational& value) { return value.get_str(); }

std::string to_decimal(const Rational& value, int places) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
    mpz_class num = abs(value.get_num()) * scale * 2 + value.get_den();
    mpz_class den = value.get_den() * 2;
    mpz_class scaled;
    mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpz_class int_part;
    mpz_class frac_part;
    mpz_fdiv_qr(int_part.get_mpz_t(), frac_part.get_mpz_t(), scaled.get_mpz_t(), scale.get_mpz_t());
    std::string out = (value < 0 && scaled != 0) ? "-" : "";
    out += int_part.get_str();
    if (places > 0) {
        std::string frac = frac_part.get_str();
        out += '.';
        out.append(static_cast<std::size_t>(places) - frac.size(), '0');
        out += frac;
    }
    return out;
}

std::vector<Rational> parse_rational_list(std::string_view text) {
    std::vector<Rational> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        out.push_back(parse_rational(piece));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace mocheck
