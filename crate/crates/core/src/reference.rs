//! Published reference values used as regression targets.
//!
//! The series below were produced with a measured dummy-head HRIR set, so
//! absolute values are only comparable when that set is loaded; with the
//! analytic head only orderings and argmins carry over.

/// Subjective score and model estimate of the 16 listening-test conditions.
pub const LISTENING_TEST_SCATTER: [(f64, f64); 16] = [
    (81.4444, 0.351354),
    (83.6667, 0.372829),
    (80.4074, 0.373022),
    (83.1481, 0.321041),
    (82.3333, 0.383437),
    (80.7778, 0.358197),
    (78.037, 0.405843),
    (83.9259, 0.316886),
    (73.7241, 0.528557),
    (65.8966, 0.596204),
    (73.6207, 0.523467),
    (73.2069, 0.529843),
    (64.8333, 0.689003),
    (51.6389, 0.862396),
    (62.1111, 0.678035),
    (58.5556, 0.787002),
];

/// Published correlation of the scatter above.
pub const LISTENING_TEST_PEARSON: f64 = -0.99;

/// Inter-microphone distances of the PSR averages, centimetres.
pub const PSR_AVERAGE_D_CM: [f64; 25] = [
    0.0, 1.55, 3.1, 4.65, 6.2, 7.75, 9.3, 10.85,
    12.4, 13.95, 15.5, 17.05, 18.6, 20.15, 21.7, 23.25,
    24.8, 26.35, 27.9, 29.45, 31.0, 32.55, 34.1, 35.65,
    37.2,
];

/// Mean uncertainty over source angles in [0, 30] deg, listener on centre.
pub const PSR_AVERAGE_ON_CENTER: [f64; 25] = [
    0.358660539215686, 0.351188725490196, 0.354917892156863, 0.36347181372549,
    0.368109068627451, 0.365964460784314, 0.369942401960784, 0.368801470588235,
    0.375819852941176, 0.375492647058824, 0.376355392156863, 0.382660539215686,
    0.384345588235294, 0.392546568627451, 0.397316176470588, 0.400998774509804,
    0.400566176470588, 0.403080882352941, 0.405324754901961, 0.416041666666667,
    0.416982843137255, 0.421536764705882, 0.422264705882353, 0.424251225490196,
    0.428109068627451,
];

/// Same, additionally averaged over x in [0, 5] cm.
pub const PSR_AVERAGE_X_0_5_CM: [f64; 25] = [
    0.437096145276292, 0.432830548128342, 0.430067067736185, 0.42553453654189,
    0.42401559714795, 0.421992758467023, 0.420120209447415, 0.417607620320856,
    0.416632575757576, 0.413791555258467, 0.412330102495544, 0.410160427807487,
    0.409578319964349, 0.408244875222816, 0.409336007130125, 0.410055369875223,
    0.411062277183601, 0.411401626559715, 0.413787321746881, 0.415368426916221,
    0.417672682709447, 0.421278966131907, 0.423117758467023, 0.425423908199643,
    0.429678364527629,
];

/// Same, additionally averaged over x in [0, 15] cm.
pub const PSR_AVERAGE_X_0_15_CM: [f64; 25] = [
    0.478316253063726, 0.474140548406863, 0.470401118259804, 0.466030790441177,
    0.463879901960784, 0.460489276960784, 0.455851179534314, 0.451495404411765,
    0.448521905637255, 0.443562806372549, 0.441304993872549, 0.43702650122549,
    0.435516773897059, 0.432397977941177, 0.431607230392157, 0.430365042892157,
    0.429470741421569, 0.42783509497549, 0.427975566789216, 0.427351026348039,
    0.428095741421569, 0.43041659007353, 0.430014859068627, 0.431385186887255,
    0.433890318627451,
];

/// Labels of the arrangement comparison, amplitude methods first.
pub const ARRANGEMENT_LABELS: [&str; 8] = [
    "psr-0", "blumlein", "xy", "ortf", "psr-18.6", "din", "nos", "psr-37.2",
];

/// Whether each arrangement in [`ARRANGEMENT_LABELS`] is a pure amplitude method.
pub const AMPLITUDE_METHOD: [bool; 8] = [true, true, true, false, false, false, false, false];

/// Listener offsets of the comparison tables, centimetres (the published
/// data are mirror symmetric, so only `x >= 0` is kept).
pub const COMPARISON_X_CM: [f64; 21] = [
    0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0,
    11.0, 12.0, 13.0, 14.0, 15.0, 16.0, 17.0, 18.0, 19.0, 20.0,
];

/// Mean uncertainty over 30 source angles within the coverage angle.
pub const COMPARISON_MEAN: [[f64; 21]; 8] = [
    [
        0.356908496732026, 0.35803137254902, 0.384271895424837, 0.415461437908497,
        0.417230718954248, 0.419883006535948, 0.385235294117647, 0.406494117647059,
        0.434133986928105, 0.456211764705882, 0.466967973856209, 0.484445098039216,
        0.485566013071895, 0.492696732026144, 0.500176470588235, 0.507949019607843,
        0.504324183006536, 0.49378954248366, 0.503332026143791, 0.526745098039216,
        0.551311764705882,
    ],
    [
        0.359432026143791, 0.360681699346405, 0.386782352941176, 0.419258823529412,
        0.421169281045752, 0.423535947712418, 0.388269281045752, 0.409530718954248,
        0.438952941176471, 0.460157516339869, 0.471603921568627, 0.488224836601307,
        0.489903921568627, 0.497441176470588, 0.50472614379085, 0.512713725490196,
        0.508703921568627, 0.497661437908497, 0.507819607843137, 0.531205882352941,
        0.556802614379085,
    ],
    [
        0.354107189542484, 0.355226797385621, 0.381060784313725, 0.411396078431373,
        0.413338562091503, 0.415698039215686, 0.381815032679739, 0.403301307189542,
        0.430075163398693, 0.451841830065359, 0.462387581699346, 0.479648366013072,
        0.48179477124183, 0.488086274509804, 0.494708496732026, 0.502660784313726,
        0.500628104575163, 0.489619607843137, 0.498067320261438, 0.521824836601307,
        0.546278431372549,
    ],
    [
        0.407503921568627, 0.408835294117647, 0.409452287581699, 0.415014379084967,
        0.417684967320261, 0.416186274509804, 0.420190196078431, 0.423724183006536,
        0.426513071895425, 0.433233986928104, 0.448143137254902, 0.443232026143791,
        0.445816339869281, 0.459152941176471, 0.467441830065359, 0.476107843137255,
        0.48677385620915, 0.495333333333333, 0.501914379084967, 0.511476470588235,
        0.523656209150327,
    ],
    [
        0.386458169934641, 0.389433333333333, 0.393828758169935, 0.402401307189543,
        0.405932679738562, 0.408412418300654, 0.415857516339869, 0.420201960784314,
        0.430866013071895, 0.438098039215686, 0.452424183006536, 0.451862091503268,
        0.455601960784314, 0.469952287581699, 0.475103267973856, 0.48361045751634,
        0.496661437908497, 0.503178431372549, 0.511241830065359, 0.519953594771242,
        0.538022222222222,
    ],
    [
        0.427834640522876, 0.429050980392157, 0.426884967320261, 0.423203921568627,
        0.425769934640523, 0.430269281045752, 0.433050980392157, 0.434333333333333,
        0.432273202614379, 0.43674183006536, 0.449069281045752, 0.444384967320261,
        0.452313725490196, 0.461775163398693, 0.466828104575163, 0.47057908496732,
        0.485562091503268, 0.490545751633987, 0.496467973856209, 0.50080522875817,
        0.510045751633987,
    ],
    [
        0.440694117647059, 0.441500653594771, 0.442170588235294, 0.443312418300654,
        0.445749673202614, 0.447397385620915, 0.449607189542484, 0.451028758169935,
        0.450477124183007, 0.453074509803922, 0.464654248366013, 0.459495424836601,
        0.463467973856209, 0.465529411764706, 0.468645098039216, 0.47330522875817,
        0.48229477124183, 0.485783006535948, 0.492035947712418, 0.496477777777778,
        0.505378431372549,
    ],
    [
        0.437309803921569, 0.438073202614379, 0.437713725490196, 0.44183660130719,
        0.44326862745098, 0.442278431372549, 0.44622091503268, 0.448030718954248,
        0.450169934640523, 0.451579738562091, 0.462490849673203, 0.454771895424837,
        0.45941045751634, 0.467648366013072, 0.46988954248366, 0.473556209150327,
        0.482635294117647, 0.486483660130719, 0.489749019607843, 0.494853594771242,
        0.507885620915033,
    ],
];

/// Max minus min uncertainty over the same angles.
pub const COMPARISON_EXCURSION: [[f64; 21]; 8] = [
    [
        0.108588235294118, 0.138745098039216, 0.150764705882353, 0.21356862745098,
        0.21743137254902, 0.22421568627451, 0.161039215686275, 0.198705882352941,
        0.262549019607843, 0.247588235294118, 0.274588235294118, 0.271509803921569,
        0.313843137254902, 0.349901960784314, 0.387196078431372, 0.379058823529412,
        0.356313725490196, 0.360843137254902, 0.385235294117647, 0.441039215686274,
        0.479137254901961,
    ],
    [
        0.103470588235294, 0.128823529411765, 0.141254901960784, 0.206392156862745,
        0.213490196078431, 0.219058823529412, 0.153764705882353, 0.196333333333333,
        0.260078431372549, 0.23521568627451, 0.271450980392157, 0.266392156862745,
        0.310274509803922, 0.344372549019608, 0.381823529411765, 0.376509803921569,
        0.354764705882353, 0.358411764705882, 0.381313725490196, 0.438196078431373,
        0.482392156862745,
    ],
    [
        0.114509803921569, 0.145176470588235, 0.159588235294118, 0.22021568627451,
        0.22378431372549, 0.229647058823529, 0.172921568627451, 0.202039215686275,
        0.267372549019608, 0.254352941176471, 0.276235294117647, 0.276274509803922,
        0.318490196078432, 0.357960784313726, 0.388607843137255, 0.38421568627451,
        0.357294117647059, 0.363549019607843, 0.386588235294118, 0.444607843137255,
        0.478549019607843,
    ],
    [
        0.131098039215686, 0.123117647058824, 0.128470588235294, 0.105313725490196,
        0.124803921568627, 0.140607843137255, 0.162588235294118, 0.158843137254902,
        0.179294117647059, 0.184588235294118, 0.172098039215686, 0.18378431372549,
        0.204294117647059, 0.192019607843137, 0.168627450980392, 0.160509803921569,
        0.207980392156863, 0.197549019607843, 0.192078431372549, 0.196117647058824,
        0.227235294117647,
    ],
    [
        0.0962549019607845, 0.11343137254902, 0.137196078431372, 0.149803921568627,
        0.147039215686275, 0.159745098039216, 0.163921568627451, 0.166490196078431,
        0.170372549019608, 0.190529411764706, 0.167509803921569, 0.166862745098039,
        0.183549019607843, 0.206019607843137, 0.213803921568627, 0.221196078431372,
        0.260313725490196, 0.260607843137255, 0.242607843137255, 0.279921568627451,
        0.31721568627451,
    ],
    [
        0.109843137254902, 0.124352941176471, 0.110725490196078, 0.147666666666667,
        0.13278431372549, 0.125039215686274, 0.132686274509804, 0.151117647058824,
        0.15743137254902, 0.177686274509804, 0.179803921568628, 0.191352941176471,
        0.204666666666667, 0.174176470588235, 0.203470588235294, 0.200588235294118,
        0.196882352941177, 0.167137254901961, 0.14521568627451, 0.149117647058823,
        0.182137254901961,
    ],
    [
        0.126509803921568, 0.14121568627451, 0.131745098039216, 0.139137254901961,
        0.153882352941176, 0.141686274509804, 0.146098039215686, 0.16143137254902,
        0.14943137254902, 0.164803921568627, 0.176, 0.171450980392157,
        0.159745098039216, 0.172411764705882, 0.192137254901961, 0.170901960784313,
        0.178156862745098, 0.194, 0.180607843137255, 0.200333333333333,
        0.208901960784314,
    ],
    [
        0.124882352941177, 0.138078431372549, 0.142803921568627, 0.149274509803922,
        0.133078431372549, 0.144137254901961, 0.144862745098039, 0.126666666666667,
        0.159333333333333, 0.155294117647059, 0.167352941176471, 0.16878431372549,
        0.181607843137255, 0.182627450980392, 0.187098039215686, 0.186647058823529,
        0.193980392156863, 0.190470588235294, 0.208588235294117, 0.214352941176471,
        0.166941176470588,
    ],
];

/// Published minimum self-score of the dummy-head dictionary.
pub const H_MIN: f64 = 0.49;
