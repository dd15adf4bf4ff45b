use std::sync::Arc;

use nalgebra::DMatrix;

pub type Mat = DMatrix<f64>;

type GroupMap = Arc<dyn Fn(&Mat) -> Mat + Send + Sync>;
type ActionMap = Arc<dyn Fn(&Mat, &Mat) -> Mat + Send + Sync>;

/// A crossed module of matrix Lie groups given by closed-form maps.
///
/// Lie algebra elements are raw matrices of the same size as the group
/// elements.
#[derive(Clone)]
pub struct MatrixCrossedModule {
    name: String,
    h_dim: usize,
    d_dim: usize,
    alpha: GroupMap,
    alpha_lie: GroupMap,
    act: ActionMap,
    act_lie: ActionMap,
    h_abelian: bool,
}

impl std::fmt::Debug for MatrixCrossedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatrixCrossedModule")
            .field("name", &self.name)
            .field("h_dim", &self.h_dim)
            .field("d_dim", &self.d_dim)
            .finish()
    }
}

/// Rotation by `angle` in the plane.
pub fn rotation2(angle: f64) -> Mat {
    let (s, c) = angle.sin_cos();
    Mat::from_row_slice(2, 2, &[c, -s, s, c])
}

/// Generator of `so(2)`.
pub fn so2_generator() -> Mat {
    Mat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
}

/// The antisymmetric matrix with axial vector `v`.
pub fn so3_hat(v: [f64; 3]) -> Mat {
    Mat::from_row_slice(3, 3, &[0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0])
}

impl MatrixCrossedModule {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        h_dim: usize,
        d_dim: usize,
        alpha: impl Fn(&Mat) -> Mat + Send + Sync + 'static,
        alpha_lie: impl Fn(&Mat) -> Mat + Send + Sync + 'static,
        act: impl Fn(&Mat, &Mat) -> Mat + Send + Sync + 'static,
        act_lie: impl Fn(&Mat, &Mat) -> Mat + Send + Sync + 'static,
        h_abelian: bool,
    ) -> Self {
        Self {
            name: name.into(),
            h_dim,
            d_dim,
            alpha: Arc::new(alpha),
            alpha_lie: Arc::new(alpha_lie),
            act: Arc::new(act),
            act_lie: Arc::new(act_lie),
            h_abelian,
        }
    }

    /// `U(1) → U(1)` by the identity, as `SO(2)`, acting trivially.
    pub fn u1_identity() -> Self {
        Self::new(
            "(U(1) -> U(1))",
            2,
            2,
            Mat::clone,
            Mat::clone,
            |_, h| h.clone(),
            |_, x| x.clone(),
            true,
        )
    }

    /// `U(1) → 1`.
    pub fn u1_to_point() -> Self {
        Self::new(
            "(U(1) -> 1)",
            2,
            1,
            |_| Mat::identity(1, 1),
            |_| Mat::zeros(1, 1),
            |_, h| h.clone(),
            |_, x| x.clone(),
            true,
        )
    }

    /// `SO(3) → SO(3)` by the identity with conjugation.
    pub fn so3_conjugation() -> Self {
        Self::new(
            "(SO(3) -> SO(3))",
            3,
            3,
            Mat::clone,
            Mat::clone,
            |d, h| d * h * d.transpose(),
            |d, x| d * x * d.transpose(),
            false,
        )
    }

    /// `U(1) → SO(3)` with trivial map and action.
    pub fn u1_central_in_so3() -> Self {
        Self::new(
            "(U(1) -> SO(3), trivial)",
            2,
            3,
            |_| Mat::identity(3, 3),
            |_| Mat::zeros(3, 3),
            |_, h| h.clone(),
            |_, x| x.clone(),
            true,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn h_dim(&self) -> usize {
        self.h_dim
    }

    pub fn d_dim(&self) -> usize {
        self.d_dim
    }

    pub fn is_h_abelian(&self) -> bool {
        self.h_abelian
    }

    pub fn alpha(&self, h: &Mat) -> Mat {
        (self.alpha)(h)
    }

    pub fn alpha_lie(&self, x: &Mat) -> Mat {
        (self.alpha_lie)(x)
    }

    /// `^d h`.
    pub fn act(&self, d: &Mat, h: &Mat) -> Mat {
        (self.act)(d, h)
    }

    /// `^d X` for `X ∈ Lie(H)`.
    pub fn act_lie(&self, d: &Mat, x: &Mat) -> Mat {
        (self.act_lie)(d, x)
    }

    /// Largest violation of the Peiffer identity `^{α(h)}h' = h h' h⁻¹` and
    /// of equivariance `α(^d h) = d α(h) d⁻¹` over the given samples.
    pub fn axiom_residual(&self, hs: &[Mat], ds: &[Mat]) -> f64 {
        let mut worst = 0.0f64;
        for h in hs {
            let h_inv = inverse(h);
            for k in hs {
                let peiffer = self.act(&self.alpha(h), k) - h * k * &h_inv;
                worst = worst.max(peiffer.norm());
            }
            for d in ds {
                let equivariance = self.alpha(&self.act(d, h)) - d * self.alpha(h) * inverse(d);
                worst = worst.max(equivariance.norm());
            }
        }
        worst
    }
}

pub(crate) fn inverse(m: &Mat) -> Mat {
    m.clone().try_inverse().expect("group elements are invertible")
}

/// `T_X(h)`: the tangent at `t = 0` of `t ↦ h·^{exp(tX)}(h⁻¹)`, by a
/// central difference with step `t_step`.
pub fn compute_t(x: &Mat, h: &Mat, xm: &MatrixCrossedModule, t_step: f64) -> Mat {
    let h_inv = inverse(h);
    let curve = |t: f64| h * xm.act(&(x * t).exp(), &h_inv);
    (curve(t_step) - curve(-t_step)) / (2.0 * t_step)
}
