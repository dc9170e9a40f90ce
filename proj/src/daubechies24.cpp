#include "epf/wavelet.hpp"

namespace epf {

namespace {

// Orthonormal Daubechies scaling filter, order 24 (extremal phase).
constexpr double kDb24[48] = {
    0.00019143580094755136950, 0.0030820817149054944362, 0.022482339949716410724,
    0.097262235833625196638, 0.27290891606772632687, 0.50437104083992499198,
    0.57493922109554199685, 0.28098555323371188334, -0.18727140688515623770,
    -0.31794307899936273755, 0.0047766136843447281880, 0.23923738878031085520,
    0.042528729641483832581, -0.17117535137034688969, -0.038777173577920016202,
    0.12101630346922423623, 0.020980113709144815350, -0.082161654208001667023,
    -0.0045784362418192216380, 0.051301620039980879156, -0.0049447094281256282998,
    -0.028213107094901890981, 0.0076617218816465858973, 0.013049970871085735831,
    -0.0062914353700181877807, -0.0047465687863231138005, 0.0037360461782825233452,
    0.0011537649368394815049, -0.0016964568189748243943, -0.000044161848561415200634,
    0.00058612705931831099337, -0.00011812332379695547406, -0.00014600798177626168389,
    0.000065593886393056340853, 0.000021832414604665583634, -0.000020228882926126976829,
    1.3411577508091147193e-8, 3.9011003385977026104e-6, -8.9802531439384077241e-7,
    -4.0325077568799716241e-7, 2.1663396532785746392e-7, -5.0576454197925003085e-10,
    -2.2557403881760861074e-8, 5.1577767896719996390e-9, 4.7483758242562311181e-10,
    -4.0246586445843797743e-10, 6.9918011576382309741e-11, -4.3427825038037102473e-12};

}  // namespace

std::span<const double> daubechies24() { return std::span<const double>(kDb24, 48); }

}  // namespace epf
