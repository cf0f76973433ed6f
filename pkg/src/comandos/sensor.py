"""Comando sense: protocolo de Ramsey repetido, espectro de Bartlett e calibração em e²/Hz."""
import logging

import numpy as np
import pandas as pd

from comandos.comum import qubit_no_ponto_operacao
from fisica.constantes import CONSTANTES
from fisica.sensoriamento import (calibrar_espectro, espectro_do_registro, linha_analitica,
                                  mapa_aliasing, sigma_zero, simular_registro, snr_prevista)
from processamento.tratar_dados import configuracao_protocolo, tom_calibracao

logger = logging.getLogger(__name__)


def executar(config, threads=1):
    p = config['protocolo']
    cfg = configuracao_protocolo(config)
    tom = tom_calibracao(config, cfg)
    qubit = qubit_no_ponto_operacao(config)
    logger.info("Simulando %d janelas de N=%d (τ=%.3g s, Δ=%.4g rad/s)", cfg.n_janelas, cfg.N,
                cfg.tau, tom.Delta)

    registro = simular_registro(cfg, tom, qubit, threads)
    estimativa = espectro_do_registro(registro, cfg, threads)
    calibrado = calibrar_espectro(estimativa, tom, cfg)

    sigma0 = sigma_zero(cfg, tom, qubit)
    exata, aproximada = linha_analitica(cfg.escala_leitura * sigma0, tom.Delta, cfg)
    piso_teorico = cfg.N / 4
    espectro = pd.DataFrame({
        'Delta_n_rad_s': estimativa.frequencias,
        'S_n': estimativa.S,
        'desvio_S_n': estimativa.desvio,
        'S_ee_e2_Hz': calibrado.S_ee,
        'S_analitico': exata + piso_teorico,
        'S_analitico_sinc2': aproximada + piso_teorico,
    })

    previsao = snr_prevista(cfg, tom, qubit)
    resumo = {
        'omega_ge_rad_s': qubit.omega_ge,
        'abs_phi_eg': qubit.phi_eg,
        'Omega_r_rad_s': qubit.omega_rabi(tom),
        'Delta_rad_s': tom.Delta,
        'sigma0': complex(sigma0),
        'omega_nyquist_rad_s': cfg.omega_nyquist,
        'omega_rbw_rad_s': cfg.omega_rbw,
        'omega_full_rad_s': cfg.omega_full,
        'frequencia_pico_rad_s': calibrado.frequencia_pico,
        'piso_S_n': calibrado.piso_ee / calibrado.fator,
        'piso_teorico_S_n': piso_teorico,
        'fator_calibracao_e2_Hz': calibrado.fator,
        'piso_S_ee_e2_Hz': calibrado.piso_ee,
        'delta_q_e_sqrtHz': calibrado.delta_q,
        'snr_medida': calibrado.snr,
        'snr_prevista': previsao['snr_geral'],
        'snr_prevista_banda': previsao['snr_banda'],
        'significancia': calibrado.significancia,
    }
    logger.info("δq = %.3g e/√Hz (f_ge = %.4g Hz)", calibrado.delta_q,
                CONSTANTES.rad_para_hz(qubit.omega_ge))

    resultados = {'espectro_sensor.csv': espectro}
    if p['deltas_aliasing_Hz']:
        deltas = CONSTANTES.hz_para_rad(np.asarray(p['deltas_aliasing_Hz']))
        resultados['aliasing.csv'] = mapa_aliasing(cfg, deltas, qubit, tom.N_drive, threads)
    if p['gravar_registro']:
        resultados['registro.bin'] = registro
    resultados['resumo_sensor.json'] = resumo
    return resultados
