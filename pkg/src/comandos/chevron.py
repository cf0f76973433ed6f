"""Comando chevron: populações sob acionamento de carga em função de ω_d e da duração."""
import logging

import numpy as np

from comandos.comum import resolver_ponto
from fisica.ajustes import ajustar_oscilacao_rabi
from fisica.constantes import CONSTANTES
from fisica.dinamica import chevron_rabi, frequencia_rabi
from fisica.erros import ErroAjuste
from processamento.tratar_dados import base_circuito, parametros_circuito

logger = logging.getLogger(__name__)


def executar(config, threads=1):
    c = config['chevron']
    params = parametros_circuito(config)
    sol, elementos = resolver_ponto(config)
    omega_ge = float(sol.energias[1] - sol.energias[0])
    phi_eg = abs(elementos.elemento('fase', 'e', 'g'))

    dessintonias = CONSTANTES.hz_para_rad(np.linspace(-c['dessintonia_max_Hz'], c['dessintonia_max_Hz'],
                                                      c['pontos_frequencia']))
    frequencias = omega_ge + dessintonias
    duracoes = np.linspace(0.0, c['duracao_max_s'], c['pontos_duracao'])
    logger.info("Chevron: %d amplitudes × %d frequências × %d durações", len(c['amplitudes']),
                len(frequencias), len(duracoes))
    tabela = chevron_rabi(params, c['amplitudes'], frequencias, duracoes, base_circuito(config),
                          n_niveis=c['n_niveis'], threads=threads)

    ressonante = frequencias[int(np.argmin(np.abs(dessintonias)))]
    rabi = []
    for N_drive in c['amplitudes']:
        previsto = frequencia_rabi(N_drive, omega_ge, phi_eg)
        linhas = tabela[(tabela['N_drive'] == N_drive) & (tabela['omega_d_rad_s'] == ressonante)]
        try:
            medido = ajustar_oscilacao_rabi(linhas['t_s'].to_numpy(), linhas['p_e'].to_numpy(),
                                            previsto)
        except ErroAjuste as e:
            logger.warning("Oscilação de Rabi não ajustada para N_drive=%g: %s", N_drive, e)
            medido = None
        rabi.append({
            'N_drive': N_drive,
            'Omega_r_previsto_rad_s': previsto,
            'Omega_r_medido_rad_s': medido,
            'razao': None if medido is None else medido / previsto,
        })

    resumo = {
        'omega_ge_rad_s': omega_ge,
        'abs_phi_eg': phi_eg,
        'omega_d_ressonante_rad_s': float(ressonante),
        'rabi': rabi,
    }
    return {'chevron.csv': tabela, 'resumo_chevron.json': resumo}
