"""Hierarquia de erros do laboratório e códigos de saída da CLI."""


class ErroLaboratorio(Exception):
    """Base de todos os erros do laboratório"""
    codigo_saida = 1


class ErroParametro(ErroLaboratorio, ValueError):
    """Parâmetro físico inválido"""
    codigo_saida = 2


class ErroConfiguracao(ErroParametro):
    """Configuração fora do esquema; `campos` lista os caminhos com problema"""

    def __init__(self, mensagem, campos=None):
        super().__init__(mensagem)
        self.campos = list(campos or [])


class ErroEntrada(ErroParametro):
    """Dados de entrada com formato inválido"""


class ErroEstabilidade(ErroParametro):
    """Polarização acima do pull-in"""


class ErroNumerico(ErroLaboratorio, RuntimeError):
    """Falha numérica (convergência, integração, ajuste)"""
    codigo_saida = 3


class ErroRigidez(ErroNumerico):
    """Integrador adaptativo não conseguiu avançar"""


class ErroAjuste(ErroNumerico):
    """Ajuste não convergiu ou dados insuficientes"""


class ErroCalibracao(ErroNumerico):
    """Pico de calibração não resolvido"""


class ErroModelo(ErroNumerico):
    """Probabilidade fora do domínio físico do modelo"""


class ErroSaida(ErroLaboratorio, OSError):
    """Diretório de saída inexistente ou sem permissão de escrita"""
    codigo_saida = 4
