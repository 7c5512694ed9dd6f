#ifndef CHEBMG_BETA_TABLE_HPP
#define CHEBMG_BETA_TABLE_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace chebmg {
namespace detail {

// Optimized 4th-kind Chebyshev weights beta_1..beta_k, one row per
// polynomial order. Frozen constants; each row is strictly increasing
// and minimizes the smoother's contribution to the two-level
// contraction bound.
inline constexpr double kBetaFlat[210] = {
    1.12500000000000,  // k=1
    1.02387287570313, 1.26408905371085,  // k=2
    1.00842544782028, 1.08867839208730, 1.33753125909618,  // k=3
    1.00391310427285, 1.04035811188593, 1.14863498546254, 1.38268869241000,  // k=4
    1.00212930146164, 1.02173711549260, 1.07872433192603, 1.19810065292663,  // k=5
    1.41322542791682,
    1.00128517255940, 1.01304293035233, 1.04678215124113, 1.11616489419675,  // k=6
    1.23829020218444, 1.43524297106744,
    1.00083464397912, 1.00843949430122, 1.03008707768713, 1.07408384092003,  // k=7
    1.15036186707366, 1.27116474046139, 1.45186658649364,
    1.00057246631197, 1.00577427662415, 1.02050187922941, 1.05019803444565,  // k=8
    1.10115572984941, 1.18086042806856, 1.29838585382576, 1.46486073151099,
    1.00040960072832, 1.00412439506106, 1.01460212148266, 1.03561113626671,  // k=9
    1.07139972529194, 1.12688273710962, 1.20785219140729, 1.32121930716746,
    1.47529642820699,
    1.00030312229652, 1.00304840660796, 1.01077022715387, 1.02619011597640,  // k=10
    1.05231724933755, 1.09255743207549, 1.15083376663972, 1.23172250870894,
    1.34060802024460, 1.48386124407011,
    1.00023058595209, 1.00231675024028, 1.00817245396304, 1.01982986566342,  // k=11
    1.03950210235324, 1.06965042700541, 1.11305754295742, 1.17290876275564,
    1.25288300576792, 1.35725579919519, 1.49101672564139,
    1.00017947200828, 1.00180189139619, 1.00634861907307, 1.01537864566306,  // k=12
    1.03056942830760, 1.05376019693943, 1.08699862592072, 1.13259183097913,
    1.19316273358172, 1.27171293675110, 1.37169337969799, 1.49708418575562,
    1.00014241921559, 1.00142906932629, 1.00503028986298, 1.01216910518495,  // k=13
    1.02414874342792, 1.04238158880820, 1.06842008128700, 1.10399010936759,
    1.15102748242645, 1.21171811910125, 1.28854264865128, 1.38432619380991,
    1.50229418757368,
    1.00011490538261, 1.00115246376914, 1.00405357333264, 1.00979590573153,  // k=14
    1.01941300472994, 1.03401425035436, 1.05480599606629, 1.08311420301813,
    1.12040891660892, 1.16833095655446, 1.22872122288238, 1.30365305707817,
    1.39546814053678, 1.50681646209583,
    1.00009404750752, 1.00094291696343, 1.00331449056444, 1.00800294833816,  // k=15
    1.01584236259140, 1.02772083317705, 1.04459535422831, 1.06750761206125,
    1.09760092545889, 1.13613855366157, 1.18452361426236, 1.24432087304475,
    1.31728069083392, 1.40536543893560, 1.51077872501845,
    1.00007794828179, 1.00078126847253, 1.00274487974401, 1.00662291017015,  // k=16
    1.01309858836971, 1.02289448329337, 1.03678321409983, 1.05559875719896,
    1.08024848405560, 1.11172607131497, 1.15112543431072, 1.19965584614973,
    1.25865841744946, 1.32962412656664, 1.41421360695576, 1.51427891730346,
    1.00006532421835, 1.00065457229394, 1.00229877774486, 1.00554326911736,  // k=17
    1.01095500750169, 1.01913015411687, 1.03070194811914, 1.04634897780009,
    1.06680393215691, 1.09286292447318, 1.12539548508825, 1.16535532700759,
    1.21379199547431, 1.27186352115440, 1.34085020626151, 1.42216968385262,
    1.51739340276302,
    1.00005528587929, 1.00055386596109, 1.00194441667431, 1.00468643017764,  // k=18
    1.00925575086302, 1.01615026747724, 1.02589581483226, 1.03905234089533,
    1.05622039735333, 1.07804801455226, 1.10523802504393, 1.13855590385702,
    1.17883819807934, 1.22700162343084, 1.28405291126305, 1.35109949588951,
    1.42936113938518, 1.52018259905167,
    1.00004720363588, 1.00047281026427, 1.00165935774692, 1.00399768913685,  // k=19
    1.00789119418335, 1.01376015830695, 1.02204625617210, 1.03321722811532,
    1.04777177911575, 1.06624474173252, 1.08921254649299, 1.11729904561317,
    1.15118173868339, 1.19159845208034, 1.23935452739299, 1.29533057810180,
    1.36049087815687, 1.43589245099391, 1.52269493294403,
    1.00004062325693, 1.00040683513747, 1.00142744315642, 1.00343771758074,  // k=20
    1.00678268540710, 1.01182049995714, 1.01892591212711, 1.02849387004706,
    1.04094327481330, 1.05672092105986, 1.07630565244070, 1.10021276361009,
    1.12899868202683, 1.16326596487872, 1.20366864864086, 1.25091799126016,
    1.30578864971467, 1.36912533874972, 1.44185001996246, 1.52496967411643,
};

inline constexpr std::size_t kBetaOffset[21] = {0, 1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 66, 78, 91, 105, 120, 136, 153, 171, 190, 210};

}  // namespace detail

inline constexpr std::size_t kBetaMaxOrder = 20;

/// Weights for the optimized 4th-kind smoother of order k.
inline std::span<const double> beta_coefficients(std::size_t k) {
  if (k < 1 || k > kBetaMaxOrder)
    throw std::out_of_range("beta_coefficients: order " + std::to_string(k) +
                            " outside tabulated range 1..20");
  return {detail::kBetaFlat + detail::kBetaOffset[k - 1],
          detail::kBetaFlat + detail::kBetaOffset[k]};
}

}  // namespace chebmg

#endif
