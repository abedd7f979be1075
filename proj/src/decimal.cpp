#include <string>

#include "tilemeasure/ratlin.hpp"

namespace tilemeasure {

namespace {

Integer pow10(long e)
{
	Integer out;
	mpz_ui_pow_ui(out.get_mpz_t(), 10, static_cast<unsigned long>(e));
	return out;
}

// x * 10^k for possibly negative k.
Rational shift10(const Rational& x, long k)
{
	return k >= 0 ? Rational(x * pow10(k)) : Rational(x / pow10(-k));
}

Integer round_half_even(const Rational& x)
{
	Integer fl = floor(x);
	Rational rem = x - fl;
	Rational half(1, 2);
	if (rem > half || (rem == half && mpz_odd_p(fl.get_mpz_t())))
		++fl;
	return fl;
}

void strip_fraction_zeros(std::string& s)
{
	if (s.find('.') == std::string::npos)
		return;
	while (s.back() == '0')
		s.pop_back();
	if (s.back() == '.')
		s.pop_back();
}

} // namespace

std::string to_decimal(const Rational& q, int significant)
{
	if (q == 0)
		return "0";
	Rational x = abs(q);
	// 10^e <= x < 10^(e+1)
	long e = static_cast<long>(x.get_num().get_str().size()) - static_cast<long>(x.get_den().get_str().size());
	while (shift10(x, -e) >= 10)
		++e;
	while (shift10(x, -e) < 1)
		--e;
	Integer digits = round_half_even(shift10(x, significant - 1 - e));
	if (digits == pow10(significant)) {
		digits /= 10;
		++e;
	}
	std::string d = digits.get_str();
	std::string out;
	if (e >= 21 || e <= -7) {
		out = d.substr(0, 1) + "." + d.substr(1);
		strip_fraction_zeros(out);
		out += (e < 0 ? "e-" : "e+") + std::to_string(e < 0 ? -e : e);
	} else if (e >= significant - 1) {
		out = d + std::string(static_cast<std::size_t>(e - significant + 1), '0');
	} else if (e >= 0) {
		out = d.substr(0, static_cast<std::size_t>(e + 1)) + "." + d.substr(static_cast<std::size_t>(e + 1));
		strip_fraction_zeros(out);
	} else {
		out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + d;
		strip_fraction_zeros(out);
	}
	return q < 0 ? "-" + out : out;
}

} // namespace tilemeasure
