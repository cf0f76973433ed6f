import math

import numpy as np
import pytest

from fisica.constantes import CONSTANTES
from fisica.dinamica import DissipacaoQubit
from fisica.erros import ErroCalibracao, ErroEntrada, ErroParametro
from fisica.sensoriamento import (FRACAO_LOBULO, ConfiguracaoProtocolo, QubitSensor,
                                  RegistroMedicao, TomCalibracao, bits_de_telegrafico,
                                  calibrar_espectro, curva_sensibilidade, envolver,
                                  espectro_do_registro, gravar_registro_binario,
                                  ler_registro_binario, limiar_significancia, linha_analitica,
                                  loci_aliasing, mapa_aliasing, media_bartlett, periodograma,
                                  sensibilidade, sensibilidade_otima_ideal, sigma_zero,
                                  simular_registro, snr_medida, snr_prevista, telegrafico)

T1 = 34e-6
OMEGA_GE = CONSTANTES.hz_para_rad(1.8e6)


def _qubit():
    return QubitSensor(omega_ge=OMEGA_GE, phi_eg=math.pi, dissipacao=DissipacaoQubit.de_T1(T1))


def _mascara_piso(cfg, Delta, largura_bins=10):
    frequencias = cfg.frequencias_bins()
    mascara = np.ones(frequencias.size, dtype=bool)
    for pico in loci_aliasing(Delta, cfg):
        mascara &= np.abs(envolver(frequencias - pico, cfg.omega_nyquist)) > largura_bins * cfg.passo_bin
    return mascara


@pytest.fixture(scope="module")
def medicao_tom():
    """500 janelas com o tom em Ω_Ny/4 e N_drive = 5e-4"""
    cfg = ConfiguracaoProtocolo(tau_I=20e-6, n_janelas=500, semente=11)
    tom = TomCalibracao(N_drive=5e-4, Delta=cfg.omega_nyquist / 4)
    registro = simular_registro(cfg, tom, _qubit())
    return cfg, tom, espectro_do_registro(registro, cfg)


def test_grandezas_do_protocolo():
    cfg = ConfiguracaoProtocolo(tau_I=20e-6)
    assert cfg.tau == pytest.approx(33e-6)
    assert cfg.omega_nyquist == pytest.approx(math.pi / 33e-6)
    assert cfg.passo_bin == pytest.approx(cfg.omega_rbw / cfg.N_p)
    frequencias = cfg.frequencias_bins()
    assert frequencias.size == 5000
    assert frequencias[0] == pytest.approx(-cfg.omega_nyquist)
    assert frequencias[2500] == 0.0


@pytest.mark.parametrize("campos", [{'N': 999}, {'N': 0}, {'escala_leitura': 0.0},
                                    {'n_janelas': 0}, {'tau_prep': -1e-6}])
def test_protocolo_invalido(campos):
    with pytest.raises(ErroParametro):
        ConfiguracaoProtocolo(tau_I=20e-6, **campos)


def test_tom_negativo():
    with pytest.raises(ErroParametro):
        TomCalibracao(N_drive=-1e-3, Delta=0.0)


def test_piso_de_projecao_quantica():
    cfg = ConfiguracaoProtocolo(tau_I=20e-6, n_janelas=400, semente=3)
    tom = TomCalibracao(N_drive=0.0, Delta=cfg.omega_nyquist / 4)
    assert sigma_zero(cfg, tom, _qubit()) == 0
    estimativa = espectro_do_registro(simular_registro(cfg, tom, _qubit()), cfg)
    piso = cfg.N / 4
    assert np.mean(estimativa.S) == pytest.approx(piso, rel=1e-12)
    assert np.median(estimativa.S) == pytest.approx(piso, rel=0.05)
    assert np.max(estimativa.S) < 1.4 * piso


def test_forma_de_linha_do_tom(medicao_tom):
    cfg, tom, estimativa = medicao_tom
    sigma0 = cfg.escala_leitura * sigma_zero(cfg, tom, _qubit())
    exata, aproximada = linha_analitica(sigma0, tom.Delta, cfg)
    indice = int(np.argmin(np.abs(estimativa.frequencias - tom.Delta)))
    assert indice - cfg.N * cfg.N_p // 2 == 625

    piso = estimativa.S[_mascara_piso(cfg, tom.Delta)].mean()
    assert estimativa.S[indice] - piso == pytest.approx(exata[indice], rel=0.05)
    assert exata[indice] == pytest.approx((abs(sigma0) * cfg.N / 2) ** 2, rel=0.01)
    assert aproximada[indice] == pytest.approx(exata[indice], rel=0.01)
    # primeiros zeros do sinc² a ±N_p bins
    for deslocamento in (-cfg.N_p, cfg.N_p):
        assert estimativa.S[indice + deslocamento] < 1.5 * cfg.N / 4


def test_snr_medida_concorda_com_prevista(medicao_tom):
    cfg, tom, estimativa = medicao_tom
    prevista = snr_prevista(cfg, tom, _qubit())['snr_geral']
    assert 4.0 < prevista < 5.5
    assert snr_medida(estimativa, tom.Delta, cfg) == pytest.approx(prevista, rel=0.10)


def test_pulso_pi_anula_o_sinal():
    cfg = ConfiguracaoProtocolo(tau_I=20e-6, n_janelas=200, semente=5)
    N_pi = math.pi / (cfg.tau_I * 2 * OMEGA_GE * math.pi)
    assert N_pi == pytest.approx(2.21e-3, rel=0.01)
    tom = TomCalibracao(N_drive=N_pi, Delta=10 * cfg.passo_bin)
    estimativa = espectro_do_registro(simular_registro(cfg, tom, _qubit()), cfg)
    indice = int(np.argmin(np.abs(estimativa.frequencias - tom.Delta)))
    piso = estimativa.S[_mascara_piso(cfg, tom.Delta)].mean()
    assert estimativa.S[indice] < piso * (1 + 4 / math.sqrt(cfg.n_janelas))


def test_calibracao_recupera_sensibilidade(medicao_tom):
    cfg, tom, estimativa = medicao_tom
    calibrado = calibrar_espectro(estimativa, tom, cfg)
    assert 11e-6 < calibrado.delta_q < 99e-6
    assert calibrado.frequencia_pico == pytest.approx(tom.Delta, abs=cfg.passo_bin)
    assert calibrado.S_ee == pytest.approx(calibrado.fator * estimativa.S)
    assert calibrado.significancia > limiar_significancia(2500)


def test_calibracao_sem_tom_falha():
    cfg = ConfiguracaoProtocolo(tau_I=20e-6, n_janelas=200, semente=9)
    tom = TomCalibracao(N_drive=0.0, Delta=cfg.omega_nyquist / 4)
    estimativa = espectro_do_registro(simular_registro(cfg, tom, _qubit()), cfg)
    with pytest.raises(ErroCalibracao):
        calibrar_espectro(estimativa, tom, cfg)


@pytest.mark.lento
def test_calibracao_com_snr_baixa_falha():
    # muitas janelas deixam o pico significativo mesmo com SNR ≈ 1.5
    cfg = ConfiguracaoProtocolo(tau_I=20e-6, n_janelas=1000, semente=13)
    tom = TomCalibracao(N_drive=1.6e-4, Delta=cfg.omega_nyquist / 4)
    estimativa = espectro_do_registro(simular_registro(cfg, tom, _qubit()), cfg)
    assert 1.0 < snr_medida(estimativa, tom.Delta, cfg) < 2.5
    with pytest.raises(ErroCalibracao, match="SNR"):
        calibrar_espectro(estimativa, tom, cfg)


def test_limiar_cresce_com_o_numero_de_bins():
    assert limiar_significancia(1) == limiar_significancia(2)
    assert limiar_significancia(2500) == pytest.approx(3 + math.sqrt(2 * math.log(2500)))
    assert limiar_significancia(10) < limiar_significancia(1000)


def test_fracao_do_lobulo_principal():
    assert FRACAO_LOBULO == pytest.approx(0.9028, abs=1e-4)


def test_mapa_de_aliasing():
    cfg = ConfiguracaoProtocolo(tau_I=20e-6, n_janelas=50, semente=2)
    deltas = np.array([0.23, -0.71, 1.37, -1.27]) * cfg.omega_nyquist
    mapa = mapa_aliasing(cfg, deltas, _qubit(), N_drive=2e-3)
    assert len(mapa) == 4
    assert (mapa['erro_1_bins'] <= 1.0).all()
    assert (mapa['erro_2_bins'] <= 1.0).all()
    linha = mapa.iloc[2]
    assert linha['previsto_1_rad_s'] == pytest.approx(-0.63 * cfg.omega_nyquist)
    assert linha['previsto_2_rad_s'] == pytest.approx(-0.37 * cfg.omega_nyquist)


def test_envolver_intervalo_semiaberto():
    assert envolver(1.0, 1.0) == pytest.approx(-1.0)
    assert envolver(-1.0, 1.0) == pytest.approx(-1.0)
    assert envolver(2.5, 1.0) == pytest.approx(0.5)


def test_sensibilidade_ideal_tem_forma_fechada():
    curva = curva_sensibilidade(T1, OMEGA_GE, 'ideal')
    tau_otimo, dq_min = sensibilidade_otima_ideal(T1, OMEGA_GE)
    assert curva.tau_otimo == pytest.approx(tau_otimo, rel=1e-6)
    assert curva.delta_q_minimo == pytest.approx(dq_min, rel=1e-6)
    assert tau_otimo == pytest.approx(T1 / 2)
    assert np.all(curva.delta_q >= dq_min * (1 - 1e-9))


def test_sensibilidade_com_preparacao_fixa():
    ideal = curva_sensibilidade(T1, OMEGA_GE, 'ideal')
    fixo = curva_sensibilidade(T1, OMEGA_GE, 'fixo', tau_prep=13e-6)
    assert 20e-6 <= fixo.tau_otimo <= 26e-6
    razao = fixo.delta_q_minimo / ideal.delta_q_minimo
    assert 1 < razao < 1.3
    assert razao == pytest.approx(1.283, abs=5e-3)


def test_sensibilidade_cenario_e_T1_invalidos():
    with pytest.raises(ErroParametro):
        sensibilidade(1e-6, T1, OMEGA_GE, cenario='outro')
    with pytest.raises(ErroParametro):
        curva_sensibilidade(0.0, OMEGA_GE)


def test_registro_independe_do_numero_de_threads():
    cfg = ConfiguracaoProtocolo(tau_I=20e-6, N=200, n_janelas=600, semente=4)
    tom = TomCalibracao(N_drive=1e-3, Delta=cfg.omega_nyquist / 3)
    serial = simular_registro(cfg, tom, _qubit(), threads=1)
    paralelo = simular_registro(cfg, tom, _qubit(), threads=4)
    np.testing.assert_array_equal(serial.bits, paralelo.bits)
    S1 = espectro_do_registro(serial, cfg, threads=1).S
    S3 = espectro_do_registro(serial, cfg, threads=3).S
    np.testing.assert_array_equal(S1, S3)


def test_sementes_diferentes_geram_registros_diferentes():
    tom = TomCalibracao(N_drive=1e-3, Delta=0.0)
    a = simular_registro(ConfiguracaoProtocolo(tau_I=20e-6, n_janelas=5, semente=1), tom, _qubit())
    b = simular_registro(ConfiguracaoProtocolo(tau_I=20e-6, n_janelas=5, semente=2), tom, _qubit())
    assert not np.array_equal(a.bits, b.bits)


def test_bartlett_concorda_com_blocos():
    cfg = ConfiguracaoProtocolo(tau_I=20e-6, N=100, n_janelas=300, semente=8)
    registro = simular_registro(cfg, TomCalibracao(N_drive=1e-3, Delta=0.0), _qubit())
    sigma = telegrafico(registro).reshape(registro.n_janelas, registro.N)
    referencia = media_bartlett(periodograma(janela, cfg.N_p, cfg.tau, cfg.N) for janela in sigma)
    estimativa = espectro_do_registro(registro, cfg)
    np.testing.assert_allclose(estimativa.S, referencia.S, rtol=1e-10)
    np.testing.assert_allclose(estimativa.desvio, referencia.desvio, rtol=1e-6, atol=1e-6 * cfg.N)
    np.testing.assert_allclose(estimativa.frequencias, referencia.frequencias)


def test_periodograma_e_bartlett_invalidos():
    with pytest.raises(ErroEntrada):
        periodograma(np.zeros(10), 5, 1e-6, N=20)
    with pytest.raises(ErroEntrada):
        media_bartlett([])


def test_telegrafico_inverte():
    bits = np.random.default_rng(0).integers(0, 2, 37).astype(np.uint8)
    sigma = telegrafico(bits)
    assert np.all(np.abs(sigma) == 0.5)
    np.testing.assert_array_equal(bits_de_telegrafico(sigma), bits)


def test_registro_binario(tmp_path):
    bits = np.random.default_rng(1).integers(0, 2, 30)
    registro = RegistroMedicao(bits=bits, N=10, n_janelas=3)
    caminho = tmp_path / 'registro.bin'
    gravar_registro_binario(registro, caminho)
    assert caminho.read_bytes()[:2] == b'FX'
    assert caminho.stat().st_size == 8 + 4
    lido = ler_registro_binario(caminho)
    assert (lido.N, lido.n_janelas) == (10, 3)
    np.testing.assert_array_equal(lido.bits, registro.bits)


def test_registro_binario_invalido(tmp_path):
    caminho = tmp_path / 'ruim.bin'
    caminho.write_bytes(b'XX' + bytes(10))
    with pytest.raises(ErroEntrada):
        ler_registro_binario(caminho)
    caminho.write_bytes(b'FX')
    with pytest.raises(ErroEntrada):
        ler_registro_binario(caminho)
    grande = RegistroMedicao(bits=np.zeros(70000), N=70000, n_janelas=1)
    with pytest.raises(ErroEntrada):
        gravar_registro_binario(grande, tmp_path / 'grande.bin')


def test_registro_com_tamanho_incoerente():
    with pytest.raises(ErroEntrada):
        RegistroMedicao(bits=np.zeros(11), N=10, n_janelas=1)
