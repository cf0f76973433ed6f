import math

import pytest

from fisica.constantes import CONSTANTES, ConstantesFisicas
from fisica.erros import ErroParametro


def test_quantum_de_fluxo_igual_a_pi_hbar_sobre_e():
    esperado = math.pi * CONSTANTES.hbar / CONSTANTES.carga_elementar
    assert CONSTANTES.quantum_fluxo == pytest.approx(esperado, rel=1e-12)
    assert CONSTANTES.quantum_fluxo == pytest.approx(2.067833848e-15, rel=1e-9)


def test_conversoes_de_unidade():
    assert CONSTANTES.hz_para_rad(1.0) == pytest.approx(2 * math.pi)
    assert CONSTANTES.rad_para_hz(CONSTANTES.hz_para_rad(1.8e6)) == pytest.approx(1.8e6)
    assert CONSTANTES.phi0_para_rad(0.5) == pytest.approx(math.pi)
    assert CONSTANTES.planck == pytest.approx(6.62607015e-34, rel=1e-12)


@pytest.mark.parametrize("campo", ['hbar', 'carga_elementar', 'boltzmann',
                                   'permissividade_vacuo', 'quantum_fluxo'])
def test_constante_nao_positiva(campo):
    with pytest.raises(ErroParametro) as erro:
        ConstantesFisicas(**{campo: 0.0})
    assert erro.value.codigo_saida == 2
