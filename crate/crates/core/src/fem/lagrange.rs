use nalgebra::DMatrix;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, exact for degree `2n − 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "at least one quadrature point");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Lagrange basis on equispaced nodes of `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct LagrangeBasis {
    nodes: Vec<f64>,
}

impl LagrangeBasis {
    pub fn equispaced(p: usize) -> Self {
        assert!(p >= 1, "degree must be at least 1");
        let nodes = (0..=p).map(|i| -1.0 + 2.0 * i as f64 / p as f64).collect();
        Self { nodes }
    }

    pub fn degree(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn value(&self, i: usize, x: f64) -> f64 {
        let xi = self.nodes[i];
        self.nodes
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &xj)| (x - xj) / (xi - xj))
            .product()
    }

    pub fn derivative(&self, i: usize, x: f64) -> f64 {
        let xi = self.nodes[i];
        let mut total = 0.0;
        for (m, &xm) in self.nodes.iter().enumerate() {
            if m == i {
                continue;
            }
            let mut term = 1.0 / (xi - xm);
            for (j, &xj) in self.nodes.iter().enumerate() {
                if j != i && j != m {
                    term *= (x - xj) / (xi - xj);
                }
            }
            total += term;
        }
        total
    }
}

/// Reference stiffness `∫ φⱼ' φᵢ'` and mass `∫ φⱼ φᵢ` on `[-1, 1]` for
/// equispaced degree-`p` Lagrange functions, with a `q`-point rule.
pub fn reference_matrices(p: usize, q: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let basis = LagrangeBasis::equispaced(p);
    let (xs, ws) = gauss_legendre(q);
    let n = p + 1;
    let mut k = DMatrix::zeros(n, n);
    let mut m = DMatrix::zeros(n, n);
    for (&x, &w) in xs.iter().zip(&ws) {
        let v: Vec<f64> = (0..n).map(|i| basis.value(i, x)).collect();
        let d: Vec<f64> = (0..n).map(|i| basis.derivative(i, x)).collect();
        for i in 0..n {
            for j in 0..n {
                k[(i, j)] += w * (d[i] * d[j]);
                m[(i, j)] += w * (v[i] * v[j]);
            }
        }
    }
    (k, m)
}
