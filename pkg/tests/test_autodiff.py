# -*- coding: utf-8 -*-
import numpy as np
import pytest
from apps.autodiff import functions as F
from apps.autodiff.gradcheck import grad_check
from apps.autodiff.gradcheck import relative_error
from apps.autodiff.tensor import Graph
from apps.autodiff.tensor import Tensor
from apps.autodiff.tensor import active_graph
from apps.autodiff.tensor import backward
from apps.training.loss import mse_loss
from config.exceptions import BoundsError
from config.exceptions import DimensionError
from config.exceptions import ParameterError
from config.exceptions import ShapeError


def param(rng, rows, cols, name):
    return Tensor(rng.normal(size=(rows, cols)), requires_grad=True, name=name)


def projected(out: Tensor, projection: np.ndarray) -> Tensor:
    return F.sum_all(F.mul(out, Tensor(projection)))


def assert_grads(f, params, rng):
    report = grad_check(f, params, rng=rng)
    assert report.passed, report.as_dict()


class TestTensor:
    def test_vectors_become_rows(self):
        assert Tensor([1.0, 2.0, 3.0]).shape == (1, 3)
        assert Tensor(4.0).shape == (1, 1)

    def test_rejects_three_dimensions(self):
        with pytest.raises(ShapeError):
            Tensor(np.zeros((2, 2, 2)))

    def test_item_requires_scalar(self):
        with pytest.raises(ShapeError):
            Tensor(np.zeros((2, 1))).item()


class TestGraph:
    def test_inference_mode_records_nothing(self, rng):
        a = param(rng, 2, 3, 'a')
        out = F.relu(a)
        assert active_graph() is None
        assert out.node is None
        assert not out.requires_grad

    def test_graph_records_and_resets(self, rng):
        a = param(rng, 2, 2, 'a')
        with Graph() as graph:
            F.tanh(F.matmul(a, a))
            assert active_graph() is graph
        assert len(graph) == 2
        assert active_graph() is None

    def test_backward_requires_scalar_loss(self, rng):
        a = param(rng, 2, 2, 'a')
        with Graph():
            out = F.tanh(a)
        with pytest.raises(ShapeError):
            backward(out)

    def test_gradients_accumulate_over_fan_out(self):
        a = Tensor([[3.0]], requires_grad=True)
        with Graph():
            loss = F.add(F.mul(a, a), a)
        backward(loss)
        assert a.grad[0, 0] == pytest.approx(7.0)

    def test_first_non_finite_names_the_operation(self):
        a = Tensor([[-1.0, 2.0]], requires_grad=True)
        with Graph() as graph:
            F.sum_all(F.mul(F.scale(a, np.inf), a))
        node = graph.first_non_finite()
        assert node is not None
        assert node.op in ('scale', 'mul')


class TestShapes:
    def test_matmul_dimension_mismatch(self, rng):
        with pytest.raises(DimensionError):
            F.matmul(Tensor(rng.normal(size=(2, 3))), Tensor(rng.normal(size=(2, 3))))

    def test_elementwise_mismatch(self):
        with pytest.raises(DimensionError):
            F.add(Tensor.zeros(2, 2), Tensor.zeros(2, 3))

    def test_unknown_elementwise_kind(self):
        with pytest.raises(ParameterError):
            F.elementwise(Tensor.zeros(1, 1), Tensor.zeros(1, 1), 'pow')

    def test_slice_out_of_bounds(self):
        with pytest.raises(BoundsError):
            F.slice_rows(Tensor.zeros(3, 2), 1, 5)

    def test_dropout_rate_validated(self):
        with pytest.raises(ParameterError):
            F.dropout(Tensor.zeros(2, 2), 1.0, True, np.random.default_rng(0))

    def test_dropout_is_identity_in_eval(self, rng):
        a = Tensor(rng.normal(size=(3, 3)))
        assert F.dropout(a, 0.5, training=False) is a

    def test_interleave_orders_by_time(self):
        a = Tensor([[1.0], [2.0]])
        b = Tensor([[10.0], [20.0]])
        np.testing.assert_array_equal(F.interleave_rows([a, b]).data, [[1.0], [10.0], [2.0], [20.0]])

    def test_conv_requires_stride_multiple(self, rng):
        with pytest.raises(ShapeError):
            F.conv1d_time(Tensor.zeros(5, 2), [Tensor.zeros(3, 2)], stride=3)


class TestValues:
    def test_softmax_rows_sum_to_one(self, rng):
        out = F.softmax_rows(Tensor(rng.normal(size=(4, 5)) * 10))
        np.testing.assert_allclose(out.data.sum(axis=1), 1.0, atol=1e-12)

    def test_masked_softmax_zeroes_masked_entries(self, rng):
        out = F.softmax_rows(Tensor(rng.normal(size=(4, 4))), mask=F.causal_mask(4))
        assert np.all(np.triu(out.data, k=1) == 0.0)
        assert out.data[0, 0] == pytest.approx(1.0)

    def test_relu_and_sigmoid(self):
        x = Tensor([[-2.0, 0.0, 3.0]])
        np.testing.assert_array_equal(F.relu(x).data, [[0.0, 0.0, 3.0]])
        assert F.sigmoid(Tensor([[0.0]])).item() == pytest.approx(0.5)

    def test_conv_matches_block_dot_products(self, rng):
        x = rng.normal(size=(6, 2))
        kernel = rng.normal(size=(3, 2))
        out = F.conv1d_time(Tensor(x), [Tensor(kernel)], stride=3).data
        assert out.shape == (2, 1)
        assert out[1, 0] == pytest.approx(np.sum(x[3:6] * kernel))

    def test_relative_error_floor(self):
        assert relative_error(1e-9, 0.0) == pytest.approx(1e-9)
        assert relative_error(100.0, 101.0) == pytest.approx(1.0 / 101.0)


class TestGradients:
    def test_matmul_add_mul(self, rng):
        a, b, c = param(rng, 3, 4, 'a'), param(rng, 4, 2, 'b'), param(rng, 3, 2, 'c')
        projection = rng.normal(size=(3, 2))
        assert_grads(lambda: projected(F.mul(F.add(F.matmul(a, b), c), c), projection), [a, b, c], rng)

    def test_sub_scale_bias(self, rng):
        a, b, bias = param(rng, 3, 2, 'a'), param(rng, 3, 2, 'b'), param(rng, 1, 2, 'bias')
        projection = rng.normal(size=(3, 2))
        assert_grads(lambda: projected(F.add_bias(F.scale(F.sub(a, b), -1.7), bias), projection), [a, b, bias], rng)

    @pytest.mark.parametrize('kind', ['sigmoid', 'tanh', 'relu'])
    def test_activations(self, rng, kind):
        a = param(rng, 3, 3, 'a')
        # lejos del quiebre de relu
        a.data = np.where(np.abs(a.data) < 0.1, 0.5, a.data)
        projection = rng.normal(size=(3, 3))
        assert_grads(lambda: projected(F.activation(a, kind), projection), [a], rng)

    def test_masked_softmax(self, rng):
        a = param(rng, 4, 4, 'a')
        projection = rng.normal(size=(4, 4))
        assert_grads(lambda: projected(F.softmax_rows(a, F.causal_mask(4)), projection), [a], rng)

    def test_structural_ops(self, rng):
        a, b = param(rng, 3, 2, 'a'), param(rng, 3, 2, 'b')
        projection = rng.normal(size=(6, 6))

        def f():
            rows = F.concat_rows([F.slice_rows(a, 1, 3), F.transpose(F.transpose(b)), F.slice_rows(a, 0, 1)])
            spliced = F.interleave_rows([a, b])
            return projected(F.concat_cols([rows, spliced, rows]), projection)

        assert_grads(f, [a, b], rng)

    def test_fuse_stack_shared_and_per_step(self, rng):
        stack = [param(rng, 4, 3, f'm{j}') for j in range(3)]
        projection = rng.normal(size=(4, 3))
        for cols in (1, 4):
            w = param(rng, 3, cols, 'w')
            assert_grads(lambda w=w: projected(F.fuse_stack(stack, w), projection), [w, *stack], rng)

    def test_conv1d_time(self, rng):
        x = param(rng, 6, 2, 'x')
        kernels = [param(rng, 2, 2, f'k{j}') for j in range(3)]
        bias = param(rng, 1, 3, 'bias')
        projection = rng.normal(size=(3, 3))
        assert_grads(lambda: projected(F.conv1d_time(x, kernels, 2, bias), projection), [x, bias, *kernels], rng)

    def test_layer_norm(self, rng):
        x, gain, bias = param(rng, 3, 5, 'x'), param(rng, 1, 5, 'gain'), param(rng, 1, 5, 'bias')
        projection = rng.normal(size=(3, 5))
        assert_grads(lambda: projected(F.layer_norm(x, gain, bias), projection), [x, gain, bias], rng)

    def test_lstm_sequence(self, rng):
        hidden = 3
        x = param(rng, 5, 2, 'x')
        w_x = Tensor(rng.normal(size=(2, 4 * hidden)) * 0.5, requires_grad=True, name='w_x')
        w_h = Tensor(rng.normal(size=(hidden, 4 * hidden)) * 0.5, requires_grad=True, name='w_h')
        bias = param(rng, 1, 4 * hidden, 'bias')
        h0, c0 = param(rng, 1, hidden, 'h0'), param(rng, 1, hidden, 'c0')
        projection = rng.normal(size=(5, hidden))
        assert_grads(lambda: projected(F.lstm_sequence(x, w_x, w_h, bias, h0, c0), projection),
                     [x, w_x, w_h, bias, h0, c0], rng)

    def test_dropout_mask_is_fixed_per_pass(self, rng):
        a = param(rng, 3, 3, 'a')
        mask_rng = np.random.default_rng(0)
        with Graph():
            out = F.dropout(a, 0.5, True, mask_rng)
            loss = F.sum_all(out)
        backward(loss)
        kept = out.data != 0.0
        np.testing.assert_array_equal(a.grad != 0.0, kept)

    def test_grad_check_reports_wrong_gradient(self, rng, monkeypatch):
        a = param(rng, 2, 2, 'a')
        monkeypatch.setattr(F.Tanh, 'backward', staticmethod(lambda ctx, grad: (grad * 2.0,)))
        report = grad_check(lambda: F.sum_all(F.tanh(a)), {'a': a})
        assert not report.passed
        assert report.failing == ['a']

    def test_grad_check_sampling_limits_entries(self, rng):
        a = param(rng, 5, 5, 'a')
        report = grad_check(lambda: F.sum_all(F.mul(a, a)), {'a': a}, max_entries=3, rng=rng)
        assert report.entries[0].checked == 3
        assert report.passed
        assert report.entries[0].size == 25
        assert (report.checked, report.size, report.exhaustive) == (3, 25, False)
        assert report.as_dict()['exhaustive'] is False

    def test_grad_check_without_sampling_is_exhaustive(self, rng):
        a = param(rng, 2, 3, 'a')
        report = grad_check(lambda: F.sum_all(F.mul(a, a)), [a])
        assert (report.checked, report.size, report.exhaustive) == (6, 6, True)
        assert report.as_dict()['max_entries'] is None

    def test_grad_check_rejects_repeated_names(self, rng):
        a, b = param(rng, 2, 2, 'w'), param(rng, 2, 2, 'w')
        with pytest.raises(ParameterError):
            grad_check(lambda: F.sum_all(F.mul(a, b)), [a, b])

    def test_grad_check_rejects_one_tensor_under_two_names(self, rng):
        a = param(rng, 2, 2, 'a')
        with pytest.raises(ParameterError):
            grad_check(lambda: F.sum_all(F.mul(a, a)), {'a': a, 'alias': a})

    def test_unnamed_tensors_get_positional_names(self, rng):
        a = Tensor(rng.normal(size=(1, 2)), requires_grad=True)
        b = Tensor(rng.normal(size=(1, 2)), requires_grad=True)
        report = grad_check(lambda: F.sum_all(F.mul(a, b)), [a, b])
        assert [e.name for e in report.entries] == ['param_0', 'param_1']
        assert report.passed


class TestHandValues:
    def test_matmul(self):
        m = Tensor([[3.0, 4.0], [5.0, 6.0]])
        np.testing.assert_array_equal(F.matmul(Tensor(np.eye(2)), m).data, m.data)
        assert F.matmul(Tensor([[1.0, 2.0]]), Tensor([[3.0], [4.0]])).item() == 11.0

    def test_elementwise(self, rng):
        x = Tensor(rng.normal(size=(3, 3)))
        assert not F.sub(x, x).data.any()
        np.testing.assert_array_equal(F.mul(Tensor([[2.0, 3.0]]), Tensor([[4.0, 5.0]])).data, [[8.0, 15.0]])
        assert F.tanh(Tensor([[0.0]])).item() == 0.0

    def test_softmax_rows(self):
        np.testing.assert_allclose(F.softmax_rows(Tensor([[2.0, 2.0, 2.0, 2.0]])).data, 0.25)
        assert F.softmax_rows(Tensor([[-7.0]])).item() == 1.0
        np.testing.assert_allclose(F.softmax_rows(Tensor([[0.0, np.log(3.0)]])).data, [[0.25, 0.75]])

    def test_structural_inverses(self, rng):
        a, b = Tensor(rng.normal(size=(2, 3))), Tensor(rng.normal(size=(4, 3)))
        np.testing.assert_array_equal(F.concat_rows([a]).data, a.data)
        np.testing.assert_array_equal(F.slice_rows(F.concat_rows([a, b]), 2, 6).data, b.data)
        c = Tensor(rng.normal(size=(4, 7)))
        np.testing.assert_array_equal(F.transpose(F.transpose(c)).data, c.data)

    def test_conv_shapes_and_annihilation(self, rng):
        x = Tensor(rng.normal(size=(9, 4)))
        kernels = [Tensor(rng.normal(size=(3, 4))) for _ in range(16)]
        assert F.conv1d_time(x, kernels, stride=3).shape == (3, 16)
        zeros = [Tensor.zeros(3, 4) for _ in range(16)]
        assert not F.conv1d_time(x, zeros, stride=3).data.any()

    def test_conv_kernel_equal_to_block(self, rng):
        x = rng.normal(size=(9, 4))
        kernels = [Tensor(x[3:6]), Tensor.zeros(3, 4)]
        out = F.conv1d_time(Tensor(x), kernels, stride=3).data
        assert out[1, 0] == pytest.approx(np.sum(x[3:6] ** 2))
        assert not out[:, 1].any()

    def test_dropout_expectation(self):
        ones = Tensor(np.ones((100, 100)))
        assert F.dropout(ones, 0.0, True, np.random.default_rng(0)) is ones
        out = F.dropout(ones, 0.5, True, np.random.default_rng(0)).data
        assert abs(out.mean() - 1.0) < 0.05
        assert set(np.unique(out)) <= {0.0, 2.0}

    def test_linear_gradients(self, rng):
        w = param(rng, 2, 2, 'w')
        with Graph():
            loss = F.sum_all(w)
        backward(loss)
        np.testing.assert_array_equal(w.grad, np.ones((2, 2)))

        w.zero_grad()
        with Graph():
            loss = F.sum_all(F.add(w, w))
        backward(loss)
        np.testing.assert_array_equal(w.grad, 2.0 * np.ones((2, 2)))

    def test_gradient_of_weighted_sum_follows_input(self, rng):
        w = param(rng, 3, 1, 'w')
        x = Tensor([[1.0, 2.0, 3.0]])
        with Graph():
            loss = F.sum_all(F.matmul(x, w))
        backward(loss)
        np.testing.assert_array_equal(w.grad[:, 0], [1.0, 2.0, 3.0])

    def test_constant_function_checks_clean(self, rng):
        w = param(rng, 2, 2, 'w')
        report = grad_check(lambda: F.sum_all(Tensor(np.ones((2, 2)))), {'w': w})
        assert report.passed
        assert report.max_relative_error == 0.0

    def test_mse_gradient(self, rng):
        pred = param(rng, 3, 2, 'pred')
        target = Tensor(rng.normal(size=(3, 2)))
        with Graph():
            loss = mse_loss(pred, target)
        backward(loss)
        np.testing.assert_allclose(pred.grad, 2.0 * (pred.data - target.data) / 6.0)
        assert_grads(lambda: mse_loss(pred, target), [pred], rng)
