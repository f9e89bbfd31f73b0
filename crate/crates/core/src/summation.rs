//! Compensated summation.

use num_complex::Complex;

use crate::scalar::Real;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Neumaier<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexNeumaier<T> {
    re: Neumaier<T>,
    im: Neumaier<T>,
}

impl<T: Real> ComplexNeumaier<T> {
    pub fn new() -> Self {
        Self {
            re: Neumaier::new(),
            im: Neumaier::new(),
        }
    }

    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

pub fn neumaier_sum<T: Real>(xs: impl IntoIterator<Item = T>) -> T {
    let mut acc = Neumaier::new();
    xs.into_iter().for_each(|x| acc.add(x));
    acc.value()
}

pub fn neumaier_sum_complex<T: Real>(zs: impl IntoIterator<Item = Complex<T>>) -> Complex<T> {
    let mut acc = ComplexNeumaier::new();
    zs.into_iter().for_each(|z| acc.add(z));
    acc.value()
}
