use num_complex::Complex64;

/// Neumaier-compensated complex accumulator. Used wherever a reduction order
/// is fixed so that results do not depend on thread count.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn add_part((sum, comp): (f64, f64), x: f64) -> (f64, f64) {
    let t = sum + x;
    let comp = if sum.abs() >= x.abs() {
        comp + ((sum - t) + x)
    } else {
        comp + ((x - t) + sum)
    };
    (t, comp)
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        self.re = add_part(self.re, z.re);
        self.im = add_part(self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = Self::default();
        for z in iter {
            s.add(z);
        }
        s
    }
}

/// Compensated sum of a real sequence.
pub fn sum_real<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter()
        .map(|x| Complex64::new(x, 0.0))
        .collect::<CompensatedSum>()
        .value()
        .re
}
