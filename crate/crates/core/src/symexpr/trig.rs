use num_traits::{One, Zero};

use super::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Wave {
    Cos,
    Sin,
}

/// `cos(freq·θ)` or `sin(freq·θ)` for the angle coordinate `var`, `freq ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrigFactor {
    pub var: usize,
    pub wave: Wave,
    pub freq: u32,
}

/// A product of trig factors, at most one per angle coordinate, sorted by
/// coordinate. The empty word is the constant function 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FourierWord(Vec<TrigFactor>);

/// Signed frequency result of a product-to-sum step, before normalization.
fn normalize(wave: Wave, freq: i64, coeff: Rational) -> Option<(Rational, Option<(Wave, u32)>)> {
    match wave {
        Wave::Cos => {
            let f = freq.unsigned_abs() as u32;
            if f == 0 {
                Some((coeff, None))
            } else {
                Some((coeff, Some((Wave::Cos, f))))
            }
        }
        Wave::Sin => {
            if freq == 0 {
                None
            } else if freq < 0 {
                Some((-coeff, Some((Wave::Sin, (-freq) as u32))))
            } else {
                Some((coeff, Some((Wave::Sin, freq as u32))))
            }
        }
    }
}

/// Product-to-sum for two factors on the same angle.
fn factor_product(a: (Wave, u32), b: (Wave, u32)) -> Vec<(Rational, Option<(Wave, u32)>)> {
    let half = Rational::new(1.into(), 2.into());
    let (fa, fb) = (a.1 as i64, b.1 as i64);
    let raw: [(Wave, i64, Rational); 2] = match (a.0, b.0) {
        (Wave::Cos, Wave::Cos) => [
            (Wave::Cos, fa - fb, half.clone()),
            (Wave::Cos, fa + fb, half),
        ],
        (Wave::Sin, Wave::Sin) => [
            (Wave::Cos, fa - fb, half.clone()),
            (Wave::Cos, fa + fb, -half),
        ],
        (Wave::Sin, Wave::Cos) => [
            (Wave::Sin, fa + fb, half.clone()),
            (Wave::Sin, fa - fb, half),
        ],
        (Wave::Cos, Wave::Sin) => [
            (Wave::Sin, fa + fb, half.clone()),
            (Wave::Sin, fb - fa, half),
        ],
    };
    raw.into_iter()
        .filter_map(|(w, f, c)| normalize(w, f, c))
        .collect()
}

impl FourierWord {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn single(var: usize, wave: Wave, freq: u32) -> Self {
        assert!(freq > 0, "zero-frequency factors are not stored");
        Self(vec![TrigFactor { var, wave, freq }])
    }

    pub fn factors(&self) -> &[TrigFactor] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, var: usize) -> bool {
        self.0.iter().any(|f| f.var == var)
    }

    pub fn factor(&self, var: usize) -> Option<&TrigFactor> {
        self.0.iter().find(|f| f.var == var)
    }

    pub(crate) fn from_factors(mut factors: Vec<TrigFactor>) -> Self {
        factors.sort();
        debug_assert!(factors.windows(2).all(|w| w[0].var != w[1].var));
        Self(factors)
    }

    /// Expands the product into a ℚ-linear combination of words.
    pub fn mul(&self, other: &Self) -> Vec<(Rational, FourierWord)> {
        let mut partial: Vec<(Rational, Vec<TrigFactor>)> = vec![(Rational::one(), Vec::new())];
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].var < b[j].var);
            let take_b = i >= a.len() || (j < b.len() && b[j].var < a[i].var);
            if take_a {
                partial.iter_mut().for_each(|(_, w)| w.push(a[i]));
                i += 1;
            } else if take_b {
                partial.iter_mut().for_each(|(_, w)| w.push(b[j]));
                j += 1;
            } else {
                let var = a[i].var;
                let expansion = factor_product((a[i].wave, a[i].freq), (b[j].wave, b[j].freq));
                let mut next = Vec::with_capacity(partial.len() * 2);
                for (c, w) in &partial {
                    for (c2, f) in &expansion {
                        let mut w2 = w.clone();
                        if let Some((wave, freq)) = f {
                            w2.push(TrigFactor {
                                var,
                                wave: *wave,
                                freq: *freq,
                            });
                        }
                        next.push((c * c2, w2));
                    }
                }
                partial = next;
                i += 1;
                j += 1;
            }
        }
        partial
            .into_iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, w)| (c, FourierWord(w)))
            .collect()
    }

    /// Derivative with respect to `var`, as (coefficient, word).
    pub fn diff(&self, var: usize) -> Option<(Rational, FourierWord)> {
        let pos = self.0.iter().position(|f| f.var == var)?;
        let mut w = self.0.clone();
        let f = w[pos];
        let k = Rational::from_integer(f.freq.into());
        let c = match f.wave {
            Wave::Cos => {
                w[pos].wave = Wave::Sin;
                -k
            }
            Wave::Sin => {
                w[pos].wave = Wave::Cos;
                k
            }
        };
        Some((c, FourierWord(w)))
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.0
            .iter()
            .map(|f| {
                let arg = f.freq as f64 * point[f.var];
                match f.wave {
                    Wave::Cos => arg.cos(),
                    Wave::Sin => arg.sin(),
                }
            })
            .product()
    }

    pub(crate) fn remap(&self, map: impl Fn(usize) -> usize) -> Self {
        Self::from_factors(
            self.0
                .iter()
                .map(|f| TrigFactor {
                    var: map(f.var),
                    ..*f
                })
                .collect(),
        )
    }
}
