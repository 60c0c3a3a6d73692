#include "t310/fixtures.hpp"

namespace t310 {

namespace {

// Factor family used by keys 551/558/550 (D wiring 0,12,4,36,16,32,20,8,24):
//   A=e+m  B=f+n  C=g+o  D=h+p
// and by keys 443/444:
//   A=q+i  B=r+j  C=s+k  D=t+l  E=u+O  F=v+P  G=w+Q  H=x+R
std::vector<std::pair<std::string, BoolPoly>> factors_551() {
    return {{"A", BoolPoly::parse("e+m")},
            {"B", BoolPoly::parse("f+n")},
            {"C", BoolPoly::parse("g+o")},
            {"D", BoolPoly::parse("h+p")}};
}

std::vector<std::pair<std::string, BoolPoly>> factors_443() {
    return {{"A", BoolPoly::parse("q+i")}, {"B", BoolPoly::parse("r+j")},
            {"C", BoolPoly::parse("s+k")}, {"D", BoolPoly::parse("t+l")},
            {"E", BoolPoly::parse("u+O")}, {"F", BoolPoly::parse("v+P")},
            {"G", BoolPoly::parse("w+Q")}, {"H", BoolPoly::parse("x+R")}};
}

BoolPoly acbd() { return BoolPoly::parse("(e+m)(g+o)+(f+n)(h+p)"); }
BoolPoly abcd_551() { return BoolPoly::parse("(e+m)(f+n)(g+o)(h+p)"); }
BoolPoly abcd_443() { return BoolPoly::parse("(q+i)(r+j)(s+k)(t+l)"); }
BoolPoly efgh_443() { return BoolPoly::parse("(u+O)(v+P)(w+Q)(x+R)"); }
BoolPoly all8_443() { return abcd_443() * efgh_443(); }

std::vector<Fixture> make_fixtures() {
    std::vector<Fixture> fx;

    {
        Fixture f;
        f.name = "551";
        f.lzs = Lzs::parse("551: P=17,4,33,12,10,8,5,11,9,30,22,24,20,2,21,34,1,25,"
                           "13,28,14,16,36,29,32,23,27 D=0,12,4,36,16,32,20,8,24");
        f.z = ZFunc::from_anf_text("1+d+e+f+de+cde+def");
        f.factors = factors_551();
        f.proven = {{"AC+BD", acbd()}, {"ABCD", abcd_551()}};
        fx.push_back(std::move(f));
    }
    {
        Fixture f;
        f.name = "558";
        f.lzs = Lzs::parse("558: P=17,4,33,12,10,8,23,24,31,25,16,10,20,2,21,34,"
                           "1,25,13,28,14,16,36,29,32,23,27 D=0,12,4,36,16,32,20,8,24");
        f.z = ZFunc::from_anf_text("1+a+ab+c+bc");
        f.factors = factors_551();
        f.proven = {{"ABCD", abcd_551()}};
        f.refuted = {{"AC+BD", acbd()}};
        fx.push_back(std::move(f));
    }
    {
        Fixture f;
        f.name = "550";
        f.lzs = Lzs::parse("550: P=17,4,33,12,10,8,22,23,24,31,30,20,20,2,21,34,"
                           "1,25,13,28,14,16,36,29,32,23,27 D=0,12,4,36,16,32,20,8,24");
        f.z = ZFunc::from_anf_text("1+b+c+d+aef+abef");
        f.factors = factors_551();
        f.proven = {{"ABCD", abcd_551()}};
        f.refuted = {{"AC+BD", acbd()}};
        fx.push_back(std::move(f));
    }
    {
        Fixture f;
        f.name = "443";
        f.lzs = Lzs::parse("443: P=9,19,33,7,10,3,18,26,17,30,4,25,28,2,21,34,1,11,"
                           "15,8,14,6,13,29,12,5,27 D=24,16,36,12,20,32,4,8,28");
        f.z = ZFunc::from_anf_text(
            "1+a+bc+abc+d+abd+acd+bcd+be+abe+ce+bce+abce+ade+abde+acde"
            "+f+af+acf+bcf+adf+bdf+abdf+ef+bef+abef+cef+bcef+adef+acdef");
        f.factors = factors_443();
        f.proven = {{"ABCD", abcd_443()}, {"EFGH", efgh_443()}, {"ABCDEFGH", all8_443()}};
        fx.push_back(std::move(f));
    }
    {
        Fixture f;
        f.name = "444";
        f.lzs = Lzs::parse("444: P=17,1,33,2,10,3,18,26,19,27,36,5,16,32,21,34,8,"
                           "25,13,28,14,6,15,7,12,23,30 D=24,20,4,12,8,32,36,16,28");
        f.z = ZFunc::from_anf_text(
            "fedcb+fedca+fedc+fecba+fecb+feca+fec+feba+feb+fea+fe+fdb+fd+fcb+fc+fb+f"
            "+edcb+ed+ec+dcb+dca+da+d+cb+a+1");
        f.factors = factors_443();
        f.proven = {{"ABCDEFGH", all8_443()}};
        f.refuted = {{"ABCD", abcd_443()}, {"EFGH", efgh_443()}};
        fx.push_back(std::move(f));
    }
    return fx;
}

} // namespace

const std::vector<Fixture>& all_fixtures() {
    static const std::vector<Fixture> fx = make_fixtures();
    return fx;
}

const Fixture& fixture(std::string_view name) {
    for (const Fixture& f : all_fixtures())
        if (f.name == name) return f;
    throw Error(Errc::not_found, "no such fixture '" + std::string(name) +
                                     "' (known: 551, 558, 550, 443, 444)");
}

bool has_fixture(std::string_view name) {
    for (const Fixture& f : all_fixtures())
        if (f.name == name) return true;
    return false;
}

} // namespace t310
