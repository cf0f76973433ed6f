import logging
import math

import numpy as np
import pytest

from fisica.circuito import (COLUNAS_ESPECTRO, ConfiguracaoBase, ParametrosCircuito,
                             TabelaTransicoes, classificar_regime, construir_hamiltoniano,
                             diagonalizar_e_rotular, divisao_tunelamento, elementos_matriz,
                             espectro_vs_fluxo, oraculo_grade, resolver_fluxos,
                             tabelas_para_dataframe)
from fisica.constantes import CONSTANTES
from fisica.erros import ErroParametro


def test_transicoes_no_ponto_de_frustracao(solucao_pi):
    tabela = TabelaTransicoes.de_solucao(solucao_pi, math.pi)
    assert 1.5e6 <= tabela.f_ge <= 2.1e6
    assert tabela.f_ef == pytest.approx(3.7e9, rel=0.10)
    assert 25e6 <= tabela.f_fh <= 75e6


def test_energias_crescentes_e_rotuladas(solucao_pi):
    assert np.all(np.diff(solucao_pi.energias) > 0)
    assert solucao_pi.rotulos == {'g': 0, 'e': 1, 'f': 2, 'h': 3}
    assert solucao_pi.residuo < 1e-9 * np.max(np.abs(solucao_pi.energias))


def test_operadores_hermitianos(params_referencia, operadores_referencia):
    ops = operadores_referencia
    H = construir_hamiltoniano(params_referencia, 0.7, ConfiguracaoBase(dimensao=ops.dimensao), ops)
    for matriz in (ops.fase, ops.carga, H):
        np.testing.assert_allclose(matriz, matriz.conj().T, rtol=0, atol=1e-12 * np.abs(matriz).max())


def test_comutador_canonico_no_bloco_interior(operadores_referencia):
    ops = operadores_referencia
    comutador = ops.fase @ ops.carga - ops.carga @ ops.fase
    interior = ops.dimensao - 2
    np.testing.assert_allclose(comutador[:interior, :interior], 1j * np.eye(interior), atol=1e-10)
    # o truncamento só afeta o último estado de Fock
    assert abs(comutador[-1, -1] - 1j) > 1


@pytest.mark.parametrize("phi_ext", [0.0, math.pi])
def test_energias_convergem_com_a_base(params_referencia, phi_ext):
    energias = []
    for dimensao in (120, 160):
        H = construir_hamiltoniano(params_referencia, phi_ext, ConfiguracaoBase(dimensao=dimensao))
        energias.append(diagonalizar_e_rotular(H, 4).energias)
    np.testing.assert_allclose(energias[0], energias[1], rtol=1e-6)


def test_elemento_de_fase_e_simetria_em_pi(elementos_pi):
    assert 2.7 <= abs(elementos_pi.elemento('fase', 'e', 'g')) <= 3.5
    # paridade: g e e têm paridades opostas em π
    assert abs(elementos_pi.cx) < 1e-8


def test_identidade_carga_fluxo(params_referencia, base_referencia):
    fluxos = np.linspace(0.05, 2 * math.pi - 0.05, 20)
    solucoes, operadores = resolver_fluxos(params_referencia, fluxos, base_referencia, k=2)
    E_C = CONSTANTES.hz_para_rad(params_referencia.E_C_Hz)
    for phi_ext, sol in zip(fluxos, solucoes):
        el = elementos_matriz(sol, operadores, phi_ext)
        omega_ge = sol.energias[1] - sol.energias[0]
        esquerda = abs(8 * E_C * el.elemento('carga', 'e', 'g'))
        direita = abs(omega_ge * el.elemento('fase', 'e', 'g'))
        assert esquerda == pytest.approx(direita, rel=1e-6)


def test_espectro_simetrico_em_fluxo(params_referencia, base_referencia):
    fluxos = [0.3, -0.3, 1.1, -1.1]
    tabelas = espectro_vs_fluxo(params_referencia, fluxos, base_referencia)
    assert tabelas[0].f_ge == pytest.approx(tabelas[1].f_ge, rel=1e-9)
    assert tabelas[2].f_ef == pytest.approx(tabelas[3].f_ef, rel=1e-9)


def test_dataframe_do_espectro(params_referencia, base_referencia):
    fluxos = np.linspace(0, 2 * math.pi, 5)
    df = tabelas_para_dataframe(espectro_vs_fluxo(params_referencia, fluxos, base_referencia, threads=2))
    assert list(df.columns) == COLUNAS_ESPECTRO
    assert len(df) == 5
    linha_pi = df.iloc[2]
    assert linha_pi['phi_ext_rad'] == pytest.approx(math.pi)
    assert 1.5e6 <= linha_pi['f_ge_Hz'] <= 2.1e6


def test_espectro_independe_do_numero_de_threads(params_referencia, base_referencia):
    fluxos = np.linspace(2.5, 3.8, 7)
    serial = tabelas_para_dataframe(espectro_vs_fluxo(params_referencia, fluxos, base_referencia, 1))
    paralelo = tabelas_para_dataframe(espectro_vs_fluxo(params_referencia, fluxos, base_referencia, 3))
    assert serial.equals(paralelo)


def test_qubit_fora_do_ponto_de_frustracao(params_referencia, base_referencia):
    phi_ext = math.pi + 2 * math.pi * 1e-3
    sol = diagonalizar_e_rotular(construir_hamiltoniano(params_referencia, phi_ext, base_referencia), 2)
    f_ge = sol.energias_Hz[1] - sol.energias_Hz[0]
    assert 5e6 <= f_ge <= 15e6


def test_divisao_tunelamento_igual_a_f_ge(params_referencia, base_referencia, solucao_pi):
    E_S = divisao_tunelamento(params_referencia, base_referencia)
    assert E_S == pytest.approx(solucao_pi.energias_Hz[1] - solucao_pi.energias_Hz[0], rel=1e-9)


@pytest.mark.lento
@pytest.mark.parametrize("phi_ext", [0.0, math.pi / 2, math.pi])
def test_oraculo_de_grade(params_referencia, base_referencia, phi_ext):
    sol = diagonalizar_e_rotular(construir_hamiltoniano(params_referencia, phi_ext, base_referencia), 4)
    grade = oraculo_grade(params_referencia, phi_ext)
    omega_p = CONSTANTES.hz_para_rad(params_referencia.frequencia_plasma_Hz)
    for E_base, E_grade in zip(sol.energias, grade):
        assert abs(E_base - E_grade) <= 1e-4 * max(abs(E_grade), omega_p)


def test_oraculo_exige_grade_fina(params_referencia):
    with pytest.raises(ErroParametro):
        oraculo_grade(params_referencia, 0.0, n_pontos=1000)


def test_base_muito_pequena():
    with pytest.raises(ErroParametro):
        ConfiguracaoBase(dimensao=10)


@pytest.mark.parametrize("campo", ['E_J_Hz', 'E_C_Hz', 'E_L_Hz'])
def test_energias_nao_positivas(campo):
    valores = {'E_J_Hz': 5e9, 'E_C_Hz': 0.4e9, 'E_L_Hz': 0.2e9, campo: 0.0}
    with pytest.raises(ErroParametro):
        ParametrosCircuito(**valores)


def test_k_fora_da_faixa(params_referencia, base_referencia):
    H = construir_hamiltoniano(params_referencia, 0.0, base_referencia)
    with pytest.raises(ErroParametro):
        diagonalizar_e_rotular(H, k=0)


def test_regime_de_fluxonium_pesado(params_referencia):
    regime = classificar_regime(params_referencia)
    assert regime['fluxonium_pesado']
    assert regime['array_valido'] is None


def test_regime_leve_e_array_invalido_emitem_aviso(caplog):
    params = ParametrosCircuito(E_J_Hz=1e9, E_C_Hz=1e9, E_L_Hz=0.5e9, E_JA_Hz=20e9, E_p_Hz=10e9,
                                n_juncoes_array=100)
    with caplog.at_level(logging.WARNING):
        regime = classificar_regime(params)
    assert not regime['fluxonium_pesado']
    assert regime['array_valido'] is False
    assert regime['E_L_array_Hz'] == pytest.approx(0.2e9)
    assert len(caplog.records) == 2
