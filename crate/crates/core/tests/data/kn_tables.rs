// Exact-fraction interpolated Kneser-Ney probabilities from kn_oracle.py
// (N = 3). Shared by the kn_oracle and acceptance test targets.

const CORPUS_A: &[&[u32]] = &[&[3, 4, 5], &[3, 4], &[4, 5, 3, 4], &[5]];
const CORPUS_B: &[&[u32]] = &[
    &[3, 4, 5, 6, 3, 4],
    &[7, 3, 4, 8, 8],
    &[5, 6, 7],
    &[3, 4, 5, 6],
    &[8, 3, 7, 4],
    &[6, 6, 5],
    &[4, 3, 4, 5, 7, 8],
    &[3],
];

// corpus A: discounts D1=1/20, D2=5/11, D3=4/7
const TABLE_A: &[(&[u32], &[f64])] = &[
    (&[0, 0], &[0.0008116883116883117, 0.048295454545454544, 0.0008116883116883117, 0.48336038961038963, 0.2333603896103896, 0.2333603896103896]),
    (&[0, 3], &[0.00027056277056277056, 0.016098484848484848, 0.00027056277056277056, 0.016098484848484848, 0.9511634199134199, 0.016098484848484848]),
    (&[3, 4], &[0.000481000481000481, 0.5740740740740741, 0.000481000481000481, 0.02861952861952862, 0.02861952861952862, 0.36772486772486773]),
    (&[4, 5], &[0.0007215007215007215, 0.5515873015873016, 0.0007215007215007215, 0.3611111111111111, 0.04292929292929293, 0.04292929292929293]),
    (&[5, 3], &[0.0005411255411255411, 0.032196969696969696, 0.0005411255411255411, 0.032196969696969696, 0.9023268398268398, 0.032196969696969696]),
    (&[2, 2], &[0.004166666666666667, 0.24791666666666667, 0.004166666666666667, 0.24791666666666667, 0.24791666666666667, 0.24791666666666667]),
    (&[1, 1], &[0.004166666666666667, 0.24791666666666667, 0.004166666666666667, 0.24791666666666667, 0.24791666666666667, 0.24791666666666667]),
];

// corpus B: discounts D1=1/2, D2=4/5, D3=15/17
const TABLE_B: &[(&[u32], &[f64])] = &[
    (&[0, 0], &[0.006617647058823529, 0.11060924369747899, 0.006617647058823529, 0.37846638655462184, 0.09065126050420168, 0.09065126050420168, 0.09065126050420168, 0.10955882352941176, 0.10955882352941176, 0.006617647058823529]),
    (&[0, 3], &[0.0029411764705882353, 0.10798319327731093, 0.0029411764705882353, 0.040756302521008404, 0.7102240896358544, 0.023949579831932775, 0.023949579831932775, 0.05196078431372549, 0.03235294117647059, 0.0029411764705882353]),
    (&[3, 4], &[0.0042352941176470585, 0.2213781512605042, 0.0042352941176470585, 0.07986554621848739, 0.03448739495798319, 0.47919327731092437, 0.03448739495798319, 0.046588235294117646, 0.09129411764705882, 0.0042352941176470585]),
    (&[4, 5], &[0.004411764705882353, 0.10315126050420168, 0.004411764705882353, 0.0611344537815126, 0.03592436974789916, 0.03592436974789916, 0.5849439775910364, 0.11715686274509804, 0.04852941176470588, 0.004411764705882353]),
    (&[5, 3], &[0.005, 0.1169047619047619, 0.005, 0.06928571428571428, 0.574047619047619, 0.04071428571428572, 0.04071428571428572, 0.08833333333333333, 0.055, 0.005]),
    (&[2, 2], &[0.0125, 0.20892857142857144, 0.0125, 0.1732142857142857, 0.10178571428571428, 0.10178571428571428, 0.10178571428571428, 0.1375, 0.1375, 0.0125]),
    (&[6, 6], &[0.008823529411764706, 0.18277310924369747, 0.008823529411764706, 0.15756302521008403, 0.07184873949579831, 0.22478991596638656, 0.10714285714285714, 0.1323529411764706, 0.09705882352941177, 0.008823529411764706]),
    (&[8, 8], &[0.006617647058823529, 0.4929621848739496, 0.006617647058823529, 0.13581932773109243, 0.05388655462184874, 0.05388655462184874, 0.05388655462184874, 0.07279411764705883, 0.11691176470588235, 0.006617647058823529]),
    (&[1, 1], &[0.0125, 0.20892857142857144, 0.0125, 0.1732142857142857, 0.10178571428571428, 0.10178571428571428, 0.10178571428571428, 0.1375, 0.1375, 0.0125]),
];
