"""Comando sensitivity: δq(τ_I) nos cenários ideal e com τ_prep fixo."""
import math

import numpy as np
import pandas as pd

from comandos.comum import qubit_no_ponto_operacao
from fisica.dinamica import resposta_detector
from fisica.sensoriamento import CENARIOS, curva_sensibilidade, sensibilidade_otima_ideal
from processamento.tratar_dados import configuracao_protocolo, tom_calibracao


def executar(config, threads=1):
    s = config['sensibilidade']
    cfg = configuracao_protocolo(config)
    qubit = qubit_no_ponto_operacao(config)
    taus_I = np.linspace(s['tau_min_s'], s['tau_max_s'], s['pontos'])

    curvas, otimos = [], []
    for T1 in s['T1s_s']:
        for cenario in CENARIOS:
            curva = curva_sensibilidade(T1, qubit.omega_ge, cenario, cfg.tau_prep, taus_I, qubit.phi_eg)
            curvas.append(pd.DataFrame({
                'cenario': cenario,
                'T1_s': T1,
                'tau_I_s': curva.taus_I,
                'delta_q_e_sqrtHz': curva.delta_q,
            }))
            linha = {
                'cenario': cenario,
                'T1_s': T1,
                'tau_I_otimo_s': curva.tau_otimo,
                'delta_q_min_e_sqrtHz': curva.delta_q_minimo,
                'tau_I_fechado_s': math.nan,
                'delta_q_fechado_e_sqrtHz': math.nan,
            }
            if cenario == 'ideal':
                linha['tau_I_fechado_s'], linha['delta_q_fechado_e_sqrtHz'] = \
                    sensibilidade_otima_ideal(T1, qubit.omega_ge, qubit.phi_eg)
            otimos.append(linha)

    tom = tom_calibracao(config, cfg)
    dessintonias = np.linspace(-3, 3, 601) * cfg.omega_full
    exata, aproximada = resposta_detector(dessintonias, qubit.omega_rabi(tom), cfg.tau_I)
    resposta = pd.DataFrame({'Delta_rad_s': dessintonias, 'f_exata': exata, 'f_sinc': aproximada})

    return {
        'sensibilidade.csv': pd.concat(curvas, ignore_index=True),
        'sensibilidade_otima.csv': pd.DataFrame(otimos),
        'resposta_detector.csv': resposta,
    }
