//! Neumaier compensated summation.
//!
//! Every series in the crate is accumulated with these in a fixed slope
//! order, so partial sums are reproducible bit for bit.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

impl Extend<Complex64> for ComplexSum {
    fn extend<T: IntoIterator<Item = Complex64>>(&mut self, iter: T) {
        for z in iter {
            self.add(z);
        }
    }
}

impl FromIterator<Complex64> for ComplexSum {
    fn from_iter<T: IntoIterator<Item = Complex64>>(iter: T) -> Self {
        let mut s = ComplexSum::new();
        s.extend(iter);
        s
    }
}
