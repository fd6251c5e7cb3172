import math

import pytest


def test_mesh_and_boundary_distance(rf):
    mesh = rf.build_graded_mesh(rf.Interval(-1.0, 1.0), 64, 2.0)
    assert mesh.n == 64
    assert mesh.nodes[0] == -1.0 and mesh.nodes[-1] == 1.0
    assert rf.boundary_distance(rf.Interval(-1.0, 1.0), 0.3) == pytest.approx(0.7)
    with pytest.raises(ValueError):
        rf.build_graded_mesh(rf.Interval(-1.0, 1.0), 4, 1.0)


def test_kernel_constant_and_kappa(rf):
    assert rf.kernel_constant(1, 0.75) == pytest.approx(0.29920671030107451, rel=1e-12)
    kappa = rf.killing_potential(rf.Interval(-1.0, 1.0), 0.75, 0.0)
    assert kappa == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), rel=1e-12)


def test_apply_pointwise_annihilates_constants(rf):
    val = rf.apply_pointwise(rf.Interval(-1.0, 1.0), 0.75, lambda x: 1.0, 0.2, tol=1e-9)
    assert abs(val) < 1e-8


def test_torsion_pipeline(rf):
    mesh = rf.build_graded_mesh(rf.Interval(-1.0, 1.0), 128, 4.0)
    assembly = rf.assemble(mesh, 0.75)
    u = rf.torsion(assembly, 1e-10)
    assert u.min_interior() > 0.0
    report = rf.hopf_ratio(u, 0.75, 0.1)
    assert report.passed
    assert report.epsilon0 > 0.0
    assert report.fitted_exponent == pytest.approx(0.5, abs=0.15)
    bounds = rf.torsion_bounds(u, 0.75)
    assert bounds.passed


def test_eigenpair(rf):
    mesh = rf.build_graded_mesh(rf.Interval(-1.0, 1.0), 96, 2.0)
    assembly = rf.assemble(mesh, 0.6)
    pair = rf.principal_eigenpair(assembly)
    assert pair.lambda1 > 0.0
    assert pair.phi1.min_interior() > 0.0
    rq = rf.energy_form(assembly, pair.phi1, pair.phi1) / rf.l2_inner(pair.phi1, pair.phi1)
    assert rq == pytest.approx(pair.lambda1, rel=1e-8)


def test_solvability_error_is_raised(rf):
    mesh = rf.build_graded_mesh(rf.Interval(-1.0, 1.0), 64, 2.0)
    assembly = rf.assemble(mesh, 0.75)
    big_c = rf.DiscreteField.constant(mesh, 50.0)
    one = rf.DiscreteField.constant(mesh, 1.0)
    with pytest.raises(RuntimeError, match="indefinite"):
        rf.solve_dirichlet(assembly, big_c, one)


def test_ball_kernels_masses(rf):
    kernels = rf.BallKernels(1, 0.75)
    assert kernels.poisson_mass() == pytest.approx(1.0, abs=1e-7)
    assert kernels.green_mass() == pytest.approx(kernels.green_mass_target(), abs=1e-7)
    assert kernels.green(0.5) > 0.0
    assert kernels.poisson(1.5) > 0.0


def test_mean_value_gap_constant(rf):
    kernels = rf.BallKernels(1, 0.75)
    rep = rf.mean_value_gap(
        kernels, rf.Interval(-1e5, 1e5), lambda x: 1.0, lambda x: 0.0, 0.0, 1.0
    )
    assert rep.gap == pytest.approx(0.0, abs=1e-6)


def test_gridded_ops(rf):
    one = rf.GriddedFunction.sample(-4.0, 4.0, 401, lambda x: 1.0)
    assert rf.maximal_function(one, 0.0, [0.5, 1.0]) == pytest.approx(2.0, abs=1e-12)
    smooth = rf.mollify(one, 0.5)
    assert smooth(0.0) == pytest.approx(1.0, abs=1e-8)


def test_expression_grammar(rf):
    assert rf.eval_expression("max(0, x)", -2.0) == 0.0
    assert rf.eval_expression("exp(0) + 2^2", 0.0) == pytest.approx(5.0)
