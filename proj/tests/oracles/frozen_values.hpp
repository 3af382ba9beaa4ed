#pragma once
// generated by generate_frozen.py (mpmath, 40 digits); do not edit

#include <complex>

namespace frozen {

using cplx = std::complex<double>;

struct LogGammaCase {
  cplx z, value;
};
inline const LogGammaCase log_gamma_cases[] = {
    {{3.0, 4.0}, {-1.7566267846037841105, 4.7426644380346579282}},
    {{-2.5, 0.2999999999999999889}, {-0.43208889261320192052, -9.0933454212897415073}},
    {{-7.2999999999999998224, -2.1000000000000000888}, {-13.61622165832649934, 20.164590466665879755}},
    {{0.10000000000000000555, 0.010000000000000000208}, {2.2476658232303512977, -0.10390589166538166232}},
    {{0.5, 0.0}, {0.57236494292470008707, 0.0}},
    {{0.0010000000000000000208, 0.0020000000000000000416}, {6.1024566441047244683, -1.1082998584608746549}},
    {{25.0, -40.0}, {29.849018814915747033, -138.94757254800082995}},
    {{-0.5, 0.000000010000000000000000209}, {1.2655121234846449497, -3.1415926532248934987}},
    {{150.0, 3.0}, {599.97937235287076933, 15.022096084687634498}},
    {{2.0, -300.0}, {-461.76428023775531985, -1413.4873257881842674}},
    {{-40.25, 0.5}, {-110.97752639865314958, -126.20933467434255345}},
    {{0.75, -0.25}, {0.12685126652095696453, 0.25843254845881058131}},
    {{6.0, 0.0}, {4.7874917427820459942, 0.0}},
    {{-3.5, -0.0010000000000000000208}, {-1.3090114954245749321, 12.564981743422553955}},
};

struct Hyp2F1Case {
  cplx a, b, c, z, value;
};
inline const Hyp2F1Case hyp2f1_cases[] = {
    {{0.2999999999999999889, 0.0}, {0.69999999999999995559, 0.0}, {1.5, 0.0}, {-3.0, 0.0}, {0.79600322784480462042, 0.0}},
    {{0.5, 1.0}, {0.5, -1.0}, {1.5, 0.0}, {-10.0, 0.0}, {-0.088690930561056401653, 0.0}},
    {{0.25, 2.0}, {0.25, -2.0}, {0.75, 0.0}, {-50.0, 0.0}, {-0.15899052115356794405, 0.0}},
    {{0.5, 0.0}, {0.5, 0.0}, {1.0, 0.0}, {-0.94999999999999995559, 0.0}, {0.84037595299339372787, 0.0}},
    {{0.25, 0.0}, {0.25, 0.0}, {0.75, 0.0}, {-200.0, 0.0}, {0.52385174633899123291, 0.0}},
    {{0.75, 0.5}, {0.75, -0.5}, {1.25, 0.0}, {-10000.0, 0.0}, {-0.00063730769468602000998, 0.0}},
    {{1.1999999999999999556, 0.0}, {0.4000000000000000222, 0.0}, {2.2999999999999998224, 0.0}, {0.9000000000000000222, 0.0}, {1.3991663337350013405, 0.0}},
    {{1.0, 3.0}, {1.0, -3.0}, {2.0, 0.0}, {-0.5, 0.0}, {-0.019598530692701807566, 0.0}},
    {{0.5, 0.0}, {1.5, 0.0}, {2.0, 0.0}, {-7.0, 0.0}, {0.41950511593529052924, 0.0}},
    {{1.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {-3.0, 0.0}, {0.46209812037329687294, 0.0}},
    {{0.2999999999999999889, 0.0}, {0.5999999999999999778, 0.0}, {0.9000000000000000222, 0.0}, {0.4000000000000000222, 0.2999999999999999889}, {1.0795024567393687959, 0.096128524395833641718}},
};

struct JacobiCase {
  double k1, k2, s;
  cplx lambda;
  double x;
  cplx value;
};
inline const JacobiCase jacobi_cases[] = {
    {0.5, 0.0, 1.4142135623730950488, {0.0, 7.2999999999999998224}, 1.5, {-0.16488819594490708361, 0.0}},
    {1.0, 0.0, 1.4142135623730950488, {0.4000000000000000222, -3.0}, 2.0, {-0.031116593228725344916, 0.1080166564443287448}},
    {0.5, 1.0, 1.0, {0.2999999999999999889, 5.0}, 3.1000000000000000888, {0.0068469609454416687493, 0.0043731014981169608477}},
    {1.5, 0.0, 1.4142135623730950488, {0.0, 0.0}, 0.80000000000000004441, {0.91487157934072561326, 0.0}},
    {2.0, 0.0, 1.4142135623730950488, {1.1999999999999999556, 0.0}, 4.0, {0.55488417888498635375, 0.0}},
    {0.5, 0.5, 1.0, {0.0, 2.5}, 0.25, {0.93071048470848894922, -0.000000000000000000000000000000000000000000000000000012041225901103527291}},
};

struct DensityCase {
  double k;
  cplx lambda, value;
};
inline const DensityCase a1_density_cases[] = {
    {0.5, {0.69999999999999995559, 0.0}, {0.49300947491671393431, 0.24900738778773396597}},
    {0.5, {3.2000000000000001776, 0.10000000000000000555}, {2.2627416997954515449, 0.32071067812004655203}},
    {1.5, {-2.0, 0.2000000000000000111}, {10.127850356403001985, -9.5456546345738345208}},
    {0.25, {10.0, -0.050000000000000002776}, {1.8803713053123001218, 0.02854200105700159339}},
    {1.0, {0.69999999999999995559, 0.0}, {0.48999999999999993783, 0.49497474683058323568}},
    {2.0, {1.3000000000000000444, 0.4000000000000000222}, {-2.0721162979507557751, 13.692393498310782101}},
};

}  // namespace frozen
